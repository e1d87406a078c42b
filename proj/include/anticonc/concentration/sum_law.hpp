#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "anticonc/core/distribution.hpp"
#include "anticonc/core/types.hpp"

namespace anticonc {

inline constexpr std::size_t kEnumerationBudget = 20'000'000;

/// Exact law of S = sum_i v_i xi_i for a discrete xi, as merged atoms.
/// When every atom probability is an exact rational whose common
/// denominator D satisfies D^n < 2^62, `weight[k] / total_weight` is the
/// exact probability of `points[k]` and `exact` is set.
struct SumLaw {
  std::vector<cplx> points;
  std::vector<double> prob;
  std::vector<std::uint64_t> weight;
  std::uint64_t total_weight = 0;
  bool exact = false;

  std::size_t size() const noexcept { return points.size(); }
  /// Probability mass of the whole law (< 1 for a law restricted to an event).
  double mass() const;
};

/// Per-sample condition on the vector of draws (xi_1, ..., xi_n).
class ConditionEvent {
 public:
  enum class Kind { always, g_epsilon, predicate };
  using Predicate = std::function<bool(std::span<const cplx>)>;

  static ConditionEvent always() { return ConditionEvent(Kind::always, 0.0, {}, "always"); }
  /// sum |xi_i|^2 <= n^{1+2 eps} and |sum xi_i| <= n^{1/2+eps}.
  static ConditionEvent g_epsilon(double eps);
  static ConditionEvent predicate(Predicate p, std::string label = "predicate") {
    return ConditionEvent(Kind::predicate, 0.0, std::move(p), std::move(label));
  }
  /// "always", "g-eps:<eps>".
  static ConditionEvent parse(const std::string& text);

  Kind kind() const noexcept { return kind_; }
  double epsilon() const noexcept { return eps_; }
  const std::string& label() const noexcept { return label_; }
  bool holds(std::span<const cplx> draws) const;

 private:
  ConditionEvent(Kind k, double eps, Predicate p, std::string label)
      : kind_(k), eps_(eps), pred_(std::move(p)), label_(std::move(label)) {}
  Kind kind_;
  double eps_;
  Predicate pred_;
  std::string label_;
};

/// Merged convolution. Throws CapabilityError when the unmerged work of a
/// convolution step exceeds `budget` (always fine when a^n <= budget).
SumLaw sum_law(const NoiseDistribution& dist, std::span<const cplx> v,
               std::size_t budget = kEnumerationBudget);

/// Law of S restricted to `event` (unnormalised: total mass = Pr(event)),
/// by enumeration of all a^n draw patterns.
SumLaw restricted_sum_law(const NoiseDistribution& dist, std::span<const cplx> v,
                          const ConditionEvent& event, std::size_t budget = kEnumerationBudget);

/// Law of x = d * Ber(1/2) with d ~ xi_1 - xi_2 (the lazy difference law).
NoiseDistribution lazy_difference_distribution(const NoiseDistribution& dist);

}  // namespace anticonc
