#pragma once

#include <span>

#include "anticonc/concentration/levy.hpp"

namespace anticonc {

struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  bool vacuous = false;
};

/// rho_r(v) >= rho_{r, xi | event}(v) * Pr(event), both sides exact.
InequalityReport conditioning_inequality_check(const NoiseDistribution& dist,
                                               std::span<const cplx> v, double r,
                                               const ConditionEvent& event);

struct PermTailReport {
  double empirical = 0.0;
  double bound = 0.0;
  double ci95 = 0.0;
  std::size_t trials = 0;
  bool pass = false;
  bool vacuous = false;
};

/// Tail of h(pi) = sum_i v_{pi(i)} w_i over uniform permutations against
/// Pr(|h| >= 2 t ||v||_inf) <= 4 exp(-t^2 / (128 ||w||_2^2)), t >= |sum w|.
PermTailReport perm_tail_check(std::span<const cplx> v, std::span<const cplx> w, double t,
                               std::size_t trials, const RandomSource& src);

struct ShiftReport {
  double rho_shifted = 0.0;  // rho_{r1+r2}(b)
  double rho_base = 0.0;     // rho_{r1}(a)
  double tail = 0.0;         // the exponential correction term
  double rhs = 0.0;          // rho_base - tail
  double ci = 0.0;           // combined 95% half-width
  bool pass = false;
  bool vacuous = false;      // rhs < 0
  bool degenerate = false;   // a == b: monotonicity only
};

/// Constant of the subgaussian shift bound for the standard complex
/// gaussian: sum (a_i - b_i) xi_i is complex gaussian with E|.|^2 = ||a-b||^2,
/// so Pr(|.| >= r2) = exp(-r2^2/||a-b||^2) and c = 1 suffices.
inline constexpr double kGaussianShiftConstant = 1.0;

/// rho_{r1+r2}(b) >= rho_{r1}(a) - 3 exp(-c r2^2 / ||a-b||^2) for standard
/// complex gaussian noise; both sides from common random numbers.
ShiftReport shift_bound_subgaussian_check(std::span<const cplx> a, std::span<const cplx> b,
                                          double r1, double r2, std::size_t trials,
                                          const RandomSource& src);

/// Conditioned on G_eps, with r2 = 2 t ||a-b||_inf and tail
/// 4 exp(-r2^2 / (256 n^{1+2eps} ||a-b||_inf^2)). Requires t >= n^{1/2+eps}.
ShiftReport shift_bound_conditioned_check(const NoiseDistribution& dist, std::span<const cplx> a,
                                          std::span<const cplx> b, double eps, double r1, double t,
                                          std::size_t trials, const RandomSource& src);

}  // namespace anticonc
