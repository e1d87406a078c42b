#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anticonc/concentration/sum_law.hpp"
#include "anticonc/core/random.hpp"

namespace anticonc {

enum class Method { exact, monte_carlo };
std::string to_string(Method m);

/// A value of rho_r(v) = sup_x Pr(S in closed B(x, r)).
struct LevyEstimate {
  double value = 0.0;
  double radius = 0.0;
  Method method = Method::exact;
  std::size_t trials = 0;
  double ci95 = 0.0;
  cplx center{};
  std::optional<Rational> exact_value;
  std::string bias_note;
};

inline constexpr const char* kMonteCarloBiasNote =
    "plug-in maximum over sampled centers: biased low (finite center set) and "
    "high (selection of the best center)";

/// Half-width of the 95% Wilson score interval for k successes in n trials.
double binomial_ci95(double p_hat, std::size_t n);

/// Sup over centers of the closed-ball mass of an explicit atom law. The sup
/// is attained either at an atom or at a center whose circle passes through
/// two atoms, so those candidates are swept exhaustively.
LevyEstimate lcf_of_law(const SumLaw& law, double r);

LevyEstimate lcf_exact(const NoiseDistribution& dist, std::span<const cplx> v, double r,
                       std::size_t budget = kEnumerationBudget);

LevyEstimate lcf_monte_carlo(const NoiseDistribution& dist, std::span<const cplx> v, double r,
                             std::size_t trials, const RandomSource& src);

/// One sample of S per trial shared by every radius, so the returned values
/// are nondecreasing in the radius.
std::vector<LevyEstimate> lcf_monte_carlo_radii(const NoiseDistribution& dist,
                                                std::span<const cplx> v,
                                                std::span<const double> radii, std::size_t trials,
                                                const RandomSource& src,
                                                const ConditionEvent& event = ConditionEvent::always());

/// Estimate of Pr(event) from `pilot` draws of the noise vector.
double event_probability(const NoiseDistribution& dist, std::size_t n, const ConditionEvent& event,
                         std::size_t pilot, const RandomSource& src);

/// Rejection-sampled conditional LCF. Throws PreconditionError when a pilot
/// run puts Pr(event) below 1e-3 (the message carries the pilot estimate).
LevyEstimate lcf_conditioned(const NoiseDistribution& dist, std::span<const cplx> v, double r,
                             const ConditionEvent& event, std::size_t trials,
                             const RandomSource& src);

/// Conditional LCF by exhaustive enumeration of the draw patterns.
LevyEstimate lcf_conditioned_exact(const NoiseDistribution& dist, std::span<const cplx> v,
                                   double r, const ConditionEvent& event,
                                   std::size_t budget = kEnumerationBudget);

/// Sampled sums S_t = sum_i v_i xi_i (one vector of draws per trial,
/// rejected trials dropped). Several coefficient vectors share the draws.
std::vector<std::vector<cplx>> sample_sums(const NoiseDistribution& dist,
                                           std::span<const ComplexVec> vectors,
                                           std::size_t trials, const RandomSource& src,
                                           const ConditionEvent& event = ConditionEvent::always());

/// Plug-in sup estimate over sampled centers (plus 0) for each radius.
std::vector<LevyEstimate> lcf_from_samples(std::span<const cplx> samples,
                                           std::span<const double> radii);

}  // namespace anticonc
