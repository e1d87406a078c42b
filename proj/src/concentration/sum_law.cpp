#include "anticonc/concentration/sum_law.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "anticonc/core/errors.hpp"

namespace anticonc {

namespace {

bool complex_less(cplx a, cplx b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

struct Entry {
  cplx z;
  double p;
  std::uint64_t w;
};

void merge_sorted(std::vector<Entry>& e) {
  std::sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) { return complex_less(a.z, b.z); });
  std::size_t out = 0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (out > 0 && e[out - 1].z == e[k].z) {
      e[out - 1].p += e[k].p;
      e[out - 1].w += e[k].w;
    } else {
      e[out++] = e[k];
    }
  }
  e.resize(out);
}

// Integer atom weights over a common denominator, when it keeps D^n < 2^62.
bool integer_weights(const NoiseDistribution& dist, std::size_t n, std::vector<std::uint64_t>& w,
                     std::uint64_t& total) {
  if (!dist.has_exact_probabilities()) return false;
  BigInt lcm = 1;
  for (const auto& a : dist.atoms()) {
    const BigInt d = denominator(*a.exact);
    lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
  }
  const BigInt total_big = boost::multiprecision::pow(lcm, static_cast<unsigned>(n));
  if (total_big >= (BigInt(1) << 62)) return false;
  w.clear();
  for (const auto& a : dist.atoms())
    w.push_back(static_cast<std::uint64_t>(numerator(*a.exact) * (lcm / denominator(*a.exact))));
  total = static_cast<std::uint64_t>(total_big);
  return true;
}

SumLaw to_law(std::vector<Entry>&& e, bool exact, std::uint64_t total) {
  SumLaw law;
  law.exact = exact;
  law.total_weight = exact ? total : 0;
  law.points.reserve(e.size());
  for (const auto& x : e) {
    law.points.push_back(x.z);
    law.prob.push_back(exact ? static_cast<double>(x.w) / static_cast<double>(total) : x.p);
    if (exact) law.weight.push_back(x.w);
  }
  return law;
}

std::size_t checked_pattern_count(std::size_t atoms, std::size_t n, std::size_t budget) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (count > budget / std::max<std::size_t>(atoms, 1))
      throw CapabilityError("exact enumeration exceeds the budget of " + std::to_string(budget) +
                            " patterns; use the Monte Carlo estimator");
    count *= atoms;
  }
  return count;
}

}  // namespace

double SumLaw::mass() const { return std::accumulate(prob.begin(), prob.end(), 0.0); }

ConditionEvent ConditionEvent::g_epsilon(double eps) {
  require(eps > 0.0 && eps < 0.5, "g-epsilon needs eps in (0, 1/2)");
  return ConditionEvent(Kind::g_epsilon, eps, {}, "g-eps:" + std::to_string(eps));
}

ConditionEvent ConditionEvent::parse(const std::string& text) {
  if (text.empty() || text == "always" || text == "none") return always();
  const std::string prefix = "g-eps:";
  if (text.rfind(prefix, 0) == 0) return g_epsilon(std::stod(text.substr(prefix.size())));
  throw PreconditionError("unknown condition '" + text + "'");
}

bool ConditionEvent::holds(std::span<const cplx> draws) const {
  switch (kind_) {
    case Kind::always: return true;
    case Kind::predicate: return pred_(draws);
    case Kind::g_epsilon: {
      const double n = static_cast<double>(draws.size());
      double energy = 0.0;
      cplx total = 0.0;
      for (const auto& z : draws) {
        energy += std::norm(z);
        total += z;
      }
      return energy <= std::pow(n, 1.0 + 2.0 * eps_) && std::abs(total) <= std::pow(n, 0.5 + eps_);
    }
  }
  return false;
}

SumLaw sum_law(const NoiseDistribution& dist, std::span<const cplx> v, std::size_t budget) {
  if (!dist.is_discrete()) throw CapabilityError("exact enumeration needs a discrete law");
  const auto& atoms = dist.atoms();
  std::vector<std::uint64_t> aw;
  std::uint64_t total = 0;
  const bool exact = integer_weights(dist, v.size(), aw, total);

  std::vector<Entry> cur{{cplx(0.0), 1.0, 1}};
  std::vector<Entry> next;
  for (const auto& vi : v) {
    if (cur.size() > budget / atoms.size())
      throw CapabilityError("exact enumeration exceeds the budget of " + std::to_string(budget) +
                            " patterns; use the Monte Carlo estimator");
    next.clear();
    next.reserve(cur.size() * atoms.size());
    for (const auto& e : cur)
      for (std::size_t a = 0; a < atoms.size(); ++a)
        next.push_back({e.z + vi * atoms[a].value, e.p * atoms[a].prob, exact ? e.w * aw[a] : 0});
    merge_sorted(next);
    std::swap(cur, next);
  }
  return to_law(std::move(cur), exact, total);
}

SumLaw restricted_sum_law(const NoiseDistribution& dist, std::span<const cplx> v,
                          const ConditionEvent& event, std::size_t budget) {
  if (!dist.is_discrete()) throw CapabilityError("exact enumeration needs a discrete law");
  const auto& atoms = dist.atoms();
  const std::size_t n = v.size();
  const std::size_t patterns = checked_pattern_count(atoms.size(), n, budget);
  std::vector<std::uint64_t> aw;
  std::uint64_t total = 0;
  const bool exact = integer_weights(dist, n, aw, total);

  std::vector<std::size_t> idx(n, 0);
  ComplexVec draws(n);
  std::vector<Entry> kept;
  for (std::size_t p = 0; p < patterns; ++p) {
    cplx s = 0.0;
    double prob = 1.0;
    std::uint64_t w = 1;
    for (std::size_t i = 0; i < n; ++i) {
      draws[i] = atoms[idx[i]].value;
      s += v[i] * draws[i];
      prob *= atoms[idx[i]].prob;
      if (exact) w *= aw[idx[i]];
    }
    if (event.holds(draws)) kept.push_back({s, prob, w});
    for (std::size_t i = 0; i < n; ++i) {  // odometer
      if (++idx[i] < atoms.size()) break;
      idx[i] = 0;
    }
  }
  merge_sorted(kept);
  return to_law(std::move(kept), exact, total);
}

NoiseDistribution lazy_difference_distribution(const NoiseDistribution& dist) {
  const auto diff = difference_distribution(dist);
  if (!diff.is_discrete()) throw CapabilityError("lazy difference law needs a discrete law");
  const bool exact = diff.has_exact_probabilities();
  std::vector<Atom> atoms;
  atoms.push_back({cplx(0.0), 0.5, exact ? std::optional<Rational>(Rational(1, 2)) : std::nullopt});
  for (const auto& a : diff.atoms()) {
    Atom half{a.value, a.prob / 2.0, std::nullopt};
    if (exact) half.exact = *a.exact / 2;
    atoms.push_back(half);
  }
  return NoiseDistribution::from_atoms(std::move(atoms));
}

}  // namespace anticonc
