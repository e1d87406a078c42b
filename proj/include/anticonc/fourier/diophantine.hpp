#pragma once

#include <optional>
#include <span>

#include "anticonc/concentration/levy.hpp"
#include "anticonc/core/types.hpp"

namespace anticonc {

struct LatticeDistance {
  double distance = 0.0;
  GaussianIntVector point;
};

/// dist(v, (Z+iZ)^n) with the per-coordinate nearest Gaussian integer.
LatticeDistance lattice_dist(std::span<const cplx> v);

struct DiophantineWitness {
  cplx eta;
  GaussianIntVector lattice_point;
  double distance = 0.0;
};

enum class AnnulusStatus {
  witness,          // some eta in the annulus has dist(eta v) < alpha / 2
  certified_clear,  // grid min >= 3 alpha / 4, hence dist >= certified_lower_bound everywhere
  undecided,
};
std::string to_string(AnnulusStatus s);

struct AnnulusOptions {
  /// Scan real eta in [f, g] only (diagnostic mode).
  bool real_eta_only = false;
  std::size_t max_points = 200'000'000;
  int refinements = 2;
};

struct AnnulusResult {
  AnnulusStatus status = AnnulusStatus::undecided;
  /// Best grid point (locally polished), always present.
  DiophantineWitness best;
  double grid_min = 0.0;
  /// Valid lower bound on dist(eta v, lattice) over the searched set when
  /// status is certified_clear; otherwise 0.
  double certified_lower_bound = 0.0;
  double step = 0.0;
  std::size_t grid_points = 0;
  bool used_real_reduction = false;
};

/// Certified grid scan of eta over {f <= |eta| <= g}. dist(eta v, lattice)
/// is ||v||_2-Lipschitz in eta, the grid step is alpha / (4 ||v||_2) in
/// modulus and arc length, and eta -> i eta is a symmetry, so one quadrant
/// suffices. For real v the 2D problem is bounded below by a 1D scan since
/// dist(eta v)^2 = D(Re eta)^2 + D(Im eta)^2.
AnnulusResult annulus_search(std::span<const cplx> v, double f, double g, double alpha,
                             const AnnulusOptions& opts = {});

struct DiophantineBound {
  double value = 0.0;
  double term_alpha = 0.0;  // 100 exp(-alpha^2 / (2 c))
  double term_f = 0.0;      // 10 c^2 f^2
  double term_g = 0.0;      // 100 exp(-g^2 / (20 c^2))
  bool vacuous = false;     // value >= 1
};

/// sqrt(2) e^{pi r^2} sqrt(term_alpha + term_f + term_g).
DiophantineBound refined_diophantine_bound(double f, double g, double alpha, double r, double c_xi);

struct DiophantineSoundnessReport {
  AnnulusResult search;
  double c_xi = 0.0;
  double alpha_certified = 0.0;
  DiophantineBound bound;
  LevyEstimate lcf;
  bool pass = false;
};

/// Certifies the annulus hypothesis (PreconditionError if it cannot), then
/// compares a Monte Carlo LCF against the bound at the certified alpha.
DiophantineSoundnessReport diophantine_soundness_check(std::span<const cplx> v,
                                                       const NoiseDistribution& dist, double f,
                                                       double g, double alpha, double r,
                                                       std::size_t trials, const RandomSource& src);

struct ScaleApproximation {
  cplx d;
  GaussianIntVector v_prime;
  double residual_l2 = 0.0;
  int j = 0;
};

struct ScaleSearch {
  std::optional<ScaleApproximation> approx;
  /// Smallest residual seen, whether or not it met the budget.
  double best_residual = 0.0;
  AnnulusResult search;
};

/// w = (2 eta sqrt(n))^{-1} (2 S / f_beta)^{-j} a; looks for D with
/// f_beta <= |D| <= d_max and ||D w - round(D w)||_2 < l2_budget.
ScaleSearch integer_approx_at_scale(std::span<const cplx> a, double eta, double s_scale,
                                    double f_beta, int j, double d_max, double l2_budget);

}  // namespace anticonc
