#include "anticonc/concentration/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "anticonc/core/errors.hpp"
#include "anticonc/core/parallel.hpp"

namespace anticonc {

InequalityReport conditioning_inequality_check(const NoiseDistribution& dist,
                                               std::span<const cplx> v, double r,
                                               const ConditionEvent& event) {
  if (!dist.is_discrete()) throw CapabilityError("conditioning check needs a discrete law");
  const LevyEstimate full = lcf_exact(dist, v, r);
  // sup_x Pr(S in B(x,r), event) = rho_{r, xi|event}(v) * Pr(event)
  const SumLaw restricted = restricted_sum_law(dist, v, event);
  InequalityReport rep;
  rep.lhs = full.value;
  if (restricted.size() == 0) {
    rep.rhs = 0.0;
    rep.pass = true;
    rep.vacuous = true;
    return rep;
  }
  const LevyEstimate joint = lcf_of_law(restricted, r);
  rep.rhs = joint.value;
  if (full.exact_value && joint.exact_value)
    rep.pass = *full.exact_value >= *joint.exact_value;
  else
    rep.pass = rep.lhs >= rep.rhs - 1e-12;
  return rep;
}

PermTailReport perm_tail_check(std::span<const cplx> v, std::span<const cplx> w, double t,
                               std::size_t trials, const RandomSource& src) {
  require(v.size() == w.size() && !v.empty(), "v and w must have equal positive dimension");
  require(norm_inf(v) > 0.0 && norm_inf(w) > 0.0, "v and w must be nonzero");
  const cplx wsum = std::accumulate(w.begin(), w.end(), cplx(0.0));
  require(t >= std::abs(wsum), "t must be at least |w_1 + ... + w_n|");
  require(trials > 0, "need at least one trial");
  const std::size_t n = v.size();
  const double threshold = 2.0 * t * norm_inf(v);
  std::vector<char> hit(trials, 0);
  parallel_for(trials, [&](std::size_t k) {
    auto rng = src.engine(k);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    cplx h = 0.0;
    for (std::size_t i = 0; i < n; ++i) h += v[perm[i]] * w[i];
    hit[k] = std::abs(h) >= threshold ? 1 : 0;
  });
  PermTailReport rep;
  rep.trials = trials;
  rep.empirical = static_cast<double>(std::count(hit.begin(), hit.end(), 1)) / static_cast<double>(trials);
  const double w2 = norm2(w);
  rep.bound = 4.0 * std::exp(-t * t / (128.0 * w2 * w2));
  rep.ci95 = binomial_ci95(rep.empirical, trials);
  rep.vacuous = rep.bound >= 1.0;
  rep.pass = rep.empirical <= rep.bound + 3.0 * rep.ci95;
  return rep;
}

namespace {

ShiftReport compare_shift(const std::vector<std::vector<cplx>>& sums, double r1, double r2,
                          double tail, bool degenerate) {
  const double rb = r1 + r2;
  const auto est_a = lcf_from_samples(sums[0], std::span<const double>(&r1, 1)).front();
  const auto est_b = lcf_from_samples(sums[1], std::span<const double>(&rb, 1)).front();
  ShiftReport rep;
  rep.degenerate = degenerate;
  rep.rho_base = est_a.value;
  rep.rho_shifted = est_b.value;
  rep.tail = tail;
  rep.rhs = rep.rho_base - tail;
  rep.ci = std::hypot(est_a.ci95, est_b.ci95);
  rep.vacuous = rep.rhs < 0.0;
  rep.pass = rep.rho_shifted >= rep.rhs - 3.0 * rep.ci;
  return rep;
}

}  // namespace

ShiftReport shift_bound_subgaussian_check(std::span<const cplx> a, std::span<const cplx> b,
                                          double r1, double r2, std::size_t trials,
                                          const RandomSource& src) {
  require(a.size() == b.size() && !a.empty(), "a and b must have equal positive dimension");
  require(r1 >= 0.0 && r2 >= 0.0, "radii must be nonnegative");
  require(trials >= 1000, "Monte Carlo LCF needs at least 1000 trials");
  ComplexVec diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const double d2 = norm2(diff);
  const bool degenerate = d2 == 0.0;
  const double tail = degenerate ? 0.0 : 3.0 * std::exp(-kGaussianShiftConstant * r2 * r2 / (d2 * d2));
  const std::vector<ComplexVec> vecs{ComplexVec(a.begin(), a.end()), ComplexVec(b.begin(), b.end())};
  const auto sums = sample_sums(NoiseDistribution::standard_complex_gaussian(), vecs, trials, src);
  return compare_shift(sums, r1, r2, tail, degenerate);
}

ShiftReport shift_bound_conditioned_check(const NoiseDistribution& dist, std::span<const cplx> a,
                                          std::span<const cplx> b, double eps, double r1, double t,
                                          std::size_t trials, const RandomSource& src) {
  require(a.size() == b.size() && !a.empty(), "a and b must have equal positive dimension");
  require(r1 >= 0.0, "radius must be nonnegative");
  const double n = static_cast<double>(a.size());
  require(t >= std::pow(n, 0.5 + eps), "t must be at least n^{1/2+eps}");
  require(trials >= 1000, "Monte Carlo LCF needs at least 1000 trials");
  const auto event = ConditionEvent::g_epsilon(eps);
  ComplexVec diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const double dinf = norm_inf(diff);
  const bool degenerate = dinf == 0.0;
  const double r2 = 2.0 * t * dinf;
  const double tail =
      degenerate ? 0.0
                 : 4.0 * std::exp(-r2 * r2 / (256.0 * std::pow(n, 1.0 + 2.0 * eps) * dinf * dinf));
  const std::vector<ComplexVec> vecs{ComplexVec(a.begin(), a.end()), ComplexVec(b.begin(), b.end())};
  const auto sums = sample_sums(dist, vecs, trials, src, event);
  if (sums[0].size() < 1000)
    throw PreconditionError("G_eps accepted only " + std::to_string(sums[0].size()) + " of " +
                            std::to_string(trials) + " trials");
  return compare_shift(sums, r1, r2, tail, degenerate);
}

}  // namespace anticonc
