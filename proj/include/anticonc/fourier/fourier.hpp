#pragma once

#include <span>

#include "anticonc/concentration/levy.hpp"
#include "anticonc/core/errors.hpp"
#include "anticonc/core/random.hpp"

namespace anticonc {

/// ||w||_xi^2 = E || Re{w (xi_1 - xi_2)} ||_{R/Z}^2. Exact sum over the
/// difference atoms for discrete laws; for the complex gaussian the real
/// projection is N(0, |w|^2 var) and the expectation is evaluated in closed
/// form (erf sums for small spread, Fourier series otherwise).
double xi_norm_sq(cplx w, const NoiseDistribution& dist);

/// P_xi(v) = E exp(-pi |sum v_i x_i|^2), x_i i.i.d. (xi_1 - xi_2) * Ber(1/2).
double p_xi_exact(std::span<const cplx> v, const NoiseDistribution& dist,
                  std::size_t budget = kEnumerationBudget);

struct MonteCarloValue {
  double value = 0.0;
  double ci95 = 0.0;
  std::size_t trials = 0;
};
MonteCarloValue p_xi_monte_carlo(std::span<const cplx> v, const NoiseDistribution& dist,
                                 std::size_t trials, const RandomSource& src);

struct MajorizationReport {
  double rho = 0.0;
  double p_xi = 0.0;
  double majorant = 0.0;  // e^{pi r^2} P_xi(v)
  bool pass = false;
};

/// rho_r(v) <= e^{pi r^2} P_xi(v), both sides by exact enumeration.
MajorizationReport fourier_majorization_check(std::span<const cplx> v, const NoiseDistribution& dist,
                                              double r);

struct DoublingReport {
  double pv = 0.0;
  double pw = 0.0;
  double pvw = 0.0;
  bool pass = false;
};

/// P_xi(v) P_xi(w) <= 2 P_xi(vw), vw the concatenation.
DoublingReport doubling_check(std::span<const cplx> v, std::span<const cplx> w,
                              const NoiseDistribution& dist);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t cells = 0;
};

class QuadratureError : public CapabilityError {
 public:
  QuadratureError(const std::string& what, QuadratureResult partial)
      : CapabilityError(what), partial_(partial) {}
  const QuadratureResult& partial() const noexcept { return partial_; }

 private:
  QuadratureResult partial_;
};

/// Adaptive 2D quadrature of exp(-sum_i ||v_i z||_xi^2 / 2 - pi |z|^2) over
/// C, truncated to the square where exp(-pi |z|^2) >= 1e-16.
QuadratureResult esseen_integral_majorant(std::span<const cplx> v, const NoiseDistribution& dist,
                                          double quad_tol = 1e-6, std::size_t max_cells = 200'000);

}  // namespace anticonc
