#include "anticonc/concentration/levy.hpp"

#include <algorithm>
#include <cmath>

#include "anticonc/core/errors.hpp"
#include "anticonc/core/parallel.hpp"
#include "disk_counter.hpp"

namespace anticonc {

std::string to_string(Method m) { return m == Method::exact ? "exact" : "monte-carlo"; }

double binomial_ci95(double p, std::size_t trials) {
  if (trials == 0) return 1.0;
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double z2 = z * z;
  return z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
}

namespace {

double containment_tol(std::span<const cplx> pts, double r) {
  double scale = std::max(1.0, r);
  for (const auto& z : pts) scale = std::max(scale, std::abs(z));
  return 1e-9 * scale;
}

// Centers at which some optimal closed disk can be placed: every atom, and
// for each pair at distance <= 2r both centers of radius-r circles through
// the pair (they coincide with the midpoint at distance exactly 2r).
std::vector<cplx> candidate_centers(std::span<const cplx> pts, double r, double tol) {
  std::vector<cplx> out(pts.begin(), pts.end());
  if (r <= 0.0) return out;
  const double reach = 2.0 * r + tol;
  std::vector<std::size_t> order(pts.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pts[a].real() < pts[b].real(); });
  for (std::size_t a = 0; a < order.size(); ++a) {
    const cplx p = pts[order[a]];
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const cplx q = pts[order[b]];
      if (q.real() - p.real() > reach) break;
      const double d = std::abs(q - p);
      if (d > reach || d == 0.0) continue;
      const cplx mid = 0.5 * (p + q);
      const double h = std::sqrt(std::max(r * r - 0.25 * d * d, 0.0));
      const cplx dir = cplx(0.0, 1.0) * (q - p) / d;
      out.push_back(mid);
      if (h > 0.0) {
        out.push_back(mid + h * dir);
        out.push_back(mid - h * dir);
      }
    }
  }
  return out;
}

template <class W>
std::pair<W, cplx> best_disk(std::span<const cplx> pts, std::span<const W> weights, double r,
                             std::span<const cplx> centers, double tol) {
  const detail::DiskCounter<W> counter(pts, weights, r, tol);
  std::vector<W> mass(centers.size());
  parallel_for(centers.size(), [&](std::size_t k) { mass[k] = counter.count(centers[k]); });
  std::size_t best = 0;
  for (std::size_t k = 1; k < centers.size(); ++k)
    if (mass[k] > mass[best]) best = k;
  return {mass[best], centers[best]};
}

}  // namespace

LevyEstimate lcf_of_law(const SumLaw& law, double r) {
  require(r >= 0.0 && std::isfinite(r), "radius must be a finite r >= 0");
  require(law.size() > 0, "empty law");
  const double tol = containment_tol(law.points, r);
  const auto centers = candidate_centers(law.points, r, tol);
  LevyEstimate est;
  est.radius = r;
  est.method = Method::exact;
  if (law.exact) {
    const auto [w, c] = best_disk<std::uint64_t>(law.points, law.weight, r, centers, tol);
    est.exact_value = Rational(BigInt(w), BigInt(law.total_weight));
    est.value = static_cast<double>(w) / static_cast<double>(law.total_weight);
    est.center = c;
  } else {
    const auto [p, c] = best_disk<double>(law.points, law.prob, r, centers, tol);
    est.value = std::min(1.0, p);
    est.center = c;
  }
  return est;
}

LevyEstimate lcf_exact(const NoiseDistribution& dist, std::span<const cplx> v, double r,
                       std::size_t budget) {
  require(all_finite(v), "vector entries must be finite");
  return lcf_of_law(sum_law(dist, v, budget), r);
}

std::vector<LevyEstimate> lcf_from_samples(std::span<const cplx> samples,
                                           std::span<const double> radii) {
  if (samples.empty()) throw PreconditionError("no samples to estimate from");
  std::vector<cplx> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(), [](cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  std::vector<cplx> uniq;
  std::vector<double> mult;
  for (const auto& z : sorted) {
    if (!uniq.empty() && uniq.back() == z) {
      mult.back() += 1.0;
    } else {
      uniq.push_back(z);
      mult.push_back(1.0);
    }
  }
  std::vector<cplx> centers = uniq;
  centers.push_back(0.0);
  const double n = static_cast<double>(samples.size());

  std::vector<LevyEstimate> out;
  for (double r : radii) {
    require(r >= 0.0 && std::isfinite(r), "radius must be a finite r >= 0");
    const double tol = containment_tol(uniq, r);
    std::pair<double, cplx> best;
    if (r == 0.0) {
      // closed ball of radius 0: multiplicity of the center itself
      const auto it = std::max_element(mult.begin(), mult.end());
      best = {*it, uniq[static_cast<std::size_t>(it - mult.begin())]};
    } else {
      best = best_disk<double>(uniq, mult, r, centers, tol);
    }
    LevyEstimate est;
    est.radius = r;
    est.method = Method::monte_carlo;
    est.trials = samples.size();
    est.value = best.first / n;
    est.center = best.second;
    est.ci95 = binomial_ci95(est.value, samples.size());
    est.bias_note = kMonteCarloBiasNote;
    out.push_back(est);
  }
  return out;
}

std::vector<std::vector<cplx>> sample_sums(const NoiseDistribution& dist,
                                           std::span<const ComplexVec> vectors,
                                           std::size_t trials, const RandomSource& src,
                                           const ConditionEvent& event) {
  require(!vectors.empty(), "need at least one coefficient vector");
  const std::size_t n = vectors[0].size();
  for (const auto& v : vectors) {
    require(v.size() == n, "coefficient vectors must share a dimension");
    require(all_finite(v), "vector entries must be finite");
  }
  const std::size_t nv = vectors.size();
  std::vector<cplx> sums(trials * nv);
  std::vector<char> kept(trials, 0);
  parallel_for(trials, [&](std::size_t t) {
    auto rng = src.engine(t);
    ComplexVec draws(n);
    dist.sample(rng, draws);
    if (!event.holds(draws)) return;
    kept[t] = 1;
    for (std::size_t k = 0; k < nv; ++k) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += vectors[k][i] * draws[i];
      sums[t * nv + k] = s;
    }
  });
  std::vector<std::vector<cplx>> out(nv);
  for (std::size_t t = 0; t < trials; ++t)
    if (kept[t])
      for (std::size_t k = 0; k < nv; ++k) out[k].push_back(sums[t * nv + k]);
  return out;
}

std::vector<LevyEstimate> lcf_monte_carlo_radii(const NoiseDistribution& dist,
                                                std::span<const cplx> v,
                                                std::span<const double> radii, std::size_t trials,
                                                const RandomSource& src,
                                                const ConditionEvent& event) {
  require(trials >= 1000, "Monte Carlo LCF needs at least 1000 trials");
  const ComplexVec vec(v.begin(), v.end());
  const auto sums = sample_sums(dist, std::span<const ComplexVec>(&vec, 1), trials, src, event);
  if (sums[0].empty()) throw PreconditionError("no trial satisfied the conditioning event");
  return lcf_from_samples(sums[0], radii);
}

LevyEstimate lcf_monte_carlo(const NoiseDistribution& dist, std::span<const cplx> v, double r,
                             std::size_t trials, const RandomSource& src) {
  return lcf_monte_carlo_radii(dist, v, std::span<const double>(&r, 1), trials, src).front();
}

double event_probability(const NoiseDistribution& dist, std::size_t n, const ConditionEvent& event,
                         std::size_t pilot, const RandomSource& src) {
  std::vector<char> hit(pilot, 0);
  parallel_for(pilot, [&](std::size_t t) {
    auto rng = src.engine(t);
    ComplexVec draws(n);
    dist.sample(rng, draws);
    hit[t] = event.holds(draws) ? 1 : 0;
  });
  std::size_t k = 0;
  for (char h : hit) k += static_cast<std::size_t>(h);
  return static_cast<double>(k) / static_cast<double>(std::max<std::size_t>(pilot, 1));
}

LevyEstimate lcf_conditioned(const NoiseDistribution& dist, std::span<const cplx> v, double r,
                             const ConditionEvent& event, std::size_t trials,
                             const RandomSource& src) {
  require(trials >= 1000, "Monte Carlo LCF needs at least 1000 trials");
  const std::size_t pilot = std::min<std::size_t>(trials, 10'000);
  const double p = event_probability(dist, v.size(), event, pilot, src.derive(0x9170));
  if (p < 1e-3)
    throw PreconditionError("conditioning event too rare: pilot estimate Pr = " + std::to_string(p) +
                            " over " + std::to_string(pilot) + " draws");
  return lcf_monte_carlo_radii(dist, v, std::span<const double>(&r, 1), trials, src, event).front();
}

LevyEstimate lcf_conditioned_exact(const NoiseDistribution& dist, std::span<const cplx> v,
                                   double r, const ConditionEvent& event, std::size_t budget) {
  const SumLaw law = restricted_sum_law(dist, v, event, budget);
  if (law.size() == 0) throw PreconditionError("conditioning event has probability zero");
  LevyEstimate est = lcf_of_law(law, r);
  if (law.exact) {
    std::uint64_t mass = 0;
    for (auto w : law.weight) mass += w;
    *est.exact_value *= Rational(BigInt(law.total_weight), BigInt(mass));
    est.value = to_double(*est.exact_value);
  } else {
    est.value = std::min(1.0, est.value / law.mass());
  }
  return est;
}

}  // namespace anticonc
