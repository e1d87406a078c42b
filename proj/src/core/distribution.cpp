#include "anticonc/core/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "anticonc/core/errors.hpp"

namespace anticonc {

namespace {

bool complex_less(cplx a, cplx b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

NoiseDistribution NoiseDistribution::rademacher() {
  const Rational half(1, 2);
  auto d = from_atoms({{-1.0, 0.5, half}, {1.0, 0.5, half}});
  d.kind_ = NoiseKind::rademacher;
  return d;
}

NoiseDistribution NoiseDistribution::complex_bernoulli_symmetric() {
  const Rational q(1, 4);
  auto d = from_atoms({{{1.0, 0.0}, 0.25, q},
                       {{-1.0, 0.0}, 0.25, q},
                       {{0.0, 1.0}, 0.25, q},
                       {{0.0, -1.0}, 0.25, q}});
  d.kind_ = NoiseKind::complex_bernoulli_symmetric;
  return d;
}

NoiseDistribution NoiseDistribution::complex_gaussian(double variance) {
  require(variance > 0.0 && std::isfinite(variance), "gaussian variance must be positive");
  NoiseDistribution d;
  d.kind_ = NoiseKind::complex_gaussian;
  d.gauss_var_ = variance;
  return d;
}

NoiseDistribution NoiseDistribution::point_mass(cplx c) {
  return from_atoms({{c, 1.0, Rational(1)}});
}

NoiseDistribution NoiseDistribution::from_atoms(std::vector<Atom> atoms) {
  require(!atoms.empty(), "discrete law needs at least one atom");
  bool exact = true;
  for (const auto& a : atoms) {
    require(std::isfinite(a.value.real()) && std::isfinite(a.value.imag()),
            "atoms must be finite");
    require(a.prob >= 0.0, "atom probabilities must be nonnegative");
    exact = exact && a.exact.has_value();
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return complex_less(a.value, b.value); });
  std::vector<Atom> merged;
  for (auto& a : atoms) {
    if (!merged.empty() && merged.back().value == a.value) {
      merged.back().prob += a.prob;
      if (exact) *merged.back().exact += *a.exact;
    } else {
      merged.push_back(std::move(a));
    }
  }
  std::erase_if(merged, [](const Atom& a) { return a.prob == 0.0; });
  double total = 0.0;
  for (const auto& a : merged) total += a.prob;
  if (exact) {
    Rational sum = 0;
    for (const auto& a : merged) sum += *a.exact;
    require(sum == 1, "atom probabilities must sum to 1 (exact sum is " + to_string(sum) + ")");
  } else {
    require(std::abs(total - 1.0) <= 1e-12, "atom probabilities must sum to 1 within 1e-12");
    for (auto& a : merged) a.exact.reset();
  }
  NoiseDistribution d;
  d.kind_ = NoiseKind::discrete_atoms;
  d.atoms_ = std::move(merged);
  double acc = 0.0;
  for (const auto& a : d.atoms_) d.cdf_.push_back(acc += a.prob);
  d.cdf_.back() = 1.0;
  return d;
}

NoiseDistribution NoiseDistribution::parse(const std::string& raw) {
  std::string text = raw;
  std::erase_if(text, [](char c) { return c == ' ' || c == '\t'; });
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "rademacher") return rademacher();
  if (head == "bernoulli" || head == "complex-bernoulli-symmetric") return complex_bernoulli_symmetric();
  if (head == "gaussian" || head == "standard-complex-gaussian") {
    return rest.empty() ? standard_complex_gaussian() : complex_gaussian(std::stod(rest));
  }
  if (head == "point") return point_mass(parse_complex(rest));
  if (head == "atoms" || head == "discrete-atoms") {
    std::vector<Atom> atoms;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto sep = item.rfind(':');
      if (sep == std::string::npos) throw PreconditionError("atom '" + item + "' needs value:prob");
      const std::string prob = item.substr(sep + 1);
      Atom a;
      a.value = parse_complex(item.substr(0, sep));
      a.exact = parse_rational(prob);
      a.prob = to_double(*a.exact);
      // decimal probabilities are stored as doubles, rationals exactly
      if (prob.find('/') == std::string::npos) a.exact.reset();
      atoms.push_back(a);
    }
    return from_atoms(std::move(atoms));
  }
  throw PreconditionError("unknown distribution '" + raw + "'");
}

std::string NoiseDistribution::name() const {
  switch (kind_) {
    case NoiseKind::rademacher: return "rademacher";
    case NoiseKind::complex_bernoulli_symmetric: return "bernoulli";
    case NoiseKind::complex_gaussian:
      return gauss_var_ == 1.0 ? "gaussian" : "gaussian:" + format_number(gauss_var_);
    case NoiseKind::discrete_atoms: break;
  }
  std::string out = "atoms:";
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    if (k) out += ',';
    out += format_number(atoms_[k].value.real());
    const double im = atoms_[k].value.imag();
    out += (im < 0 || std::signbit(im) ? "" : "+") + format_number(im) + "i:";
    out += atoms_[k].exact ? to_string(*atoms_[k].exact) : format_number(atoms_[k].prob);
  }
  return out;
}

bool NoiseDistribution::has_exact_probabilities() const noexcept {
  if (!is_discrete()) return false;
  return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.exact.has_value(); });
}

cplx NoiseDistribution::mean() const noexcept {
  cplx m = 0.0;
  for (const auto& a : atoms_) m += a.prob * a.value;
  return m;
}

double NoiseDistribution::variance() const noexcept {
  if (kind_ == NoiseKind::complex_gaussian) return gauss_var_;
  const cplx m = mean();
  double v = 0.0;
  for (const auto& a : atoms_) v += a.prob * std::norm(a.value - m);
  return v;
}

cplx NoiseDistribution::sample(Xoshiro256pp& rng) const noexcept {
  if (kind_ == NoiseKind::complex_gaussian) {
    const auto [x, y] = rng.normal_pair();
    const double s = std::sqrt(gauss_var_ / 2.0);
    return {s * x, s * y};
  }
  if (atoms_.size() == 1) {
    rng();  // keep one draw per sample regardless of the law
    return atoms_[0].value;
  }
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
      it - cdf_.begin(), static_cast<std::ptrdiff_t>(atoms_.size()) - 1));
  return atoms_[idx].value;
}

void NoiseDistribution::sample(Xoshiro256pp& rng, std::span<cplx> out) const noexcept {
  for (auto& z : out) z = sample(rng);
}

ComplexVec sample_vector(const NoiseDistribution& dist, std::size_t n, const RandomSource& src,
                         std::uint64_t trial) {
  require(n >= 1, "sample_vector needs n >= 1");
  ComplexVec out(n);
  auto rng = src.engine(trial);
  dist.sample(rng, out);
  return out;
}

NoiseDistribution difference_distribution(const NoiseDistribution& dist) {
  if (dist.kind() == NoiseKind::complex_gaussian)
    return NoiseDistribution::complex_gaussian(2.0 * dist.gaussian_variance());
  const bool exact = dist.has_exact_probabilities();
  std::vector<Atom> diff;
  for (const auto& a : dist.atoms())
    for (const auto& b : dist.atoms()) {
      Atom d;
      d.value = a.value - b.value;
      d.prob = a.prob * b.prob;
      if (exact) d.exact = *a.exact * *b.exact;
      diff.push_back(d);
    }
  if (!exact) {
    // renormalise rounding drift so the 1e-12 sum check stays meaningful
    double total = 0.0;
    for (const auto& d : diff) total += d.prob;
    for (auto& d : diff) d.prob /= total;
  }
  return NoiseDistribution::from_atoms(std::move(diff));
}

namespace {

GoodnessCertificate goodness_discrete(const NoiseDistribution& dist) {
  const auto diff = difference_distribution(dist);
  const bool exact = diff.has_exact_probabilities();
  struct Mass {
    double radius;
    double prob;
    Rational exact;
  };
  std::vector<Mass> masses;
  for (const auto& a : diff.atoms())
    if (a.value != cplx(0.0)) masses.push_back({std::abs(a.value), a.prob, exact ? *a.exact : Rational(0)});

  constexpr double rel = 1e-12;
  auto coverage = [&](double c, Rational* q) {
    double p = 0.0;
    Rational pq = 0;
    for (const auto& m : masses)
      if (m.radius >= (1.0 / c) * (1 - rel) && m.radius <= c * (1 + rel)) {
        p += m.prob;
        pq += m.exact;
      }
    if (q) *q = pq;
    return p;
  };
  // candidates of the form 1/p are rounded, hence the relative slack
  auto satisfied = [&](double c) {
    Rational q;
    const double p = exact ? to_double((coverage(c, &q), q)) : coverage(c, nullptr);
    return p * c >= 1.0 - 1e-12;
  };

  // Pr(1/C <= |d| <= C) only jumps at C in {|d|, 1/|d|}; between jumps the
  // minimal admissible C is 1/(current coverage).
  std::vector<double> candidates{1.0};
  for (const auto& m : masses) {
    candidates.push_back(std::max(m.radius, 1.0 / m.radius));
  }
  std::sort(candidates.begin(), candidates.end());
  const std::size_t base = candidates.size();
  for (std::size_t k = 0; k < base; ++k) {
    const double p = coverage(candidates[k], nullptr);
    if (p > 0.0) candidates.push_back(std::max(1.0, 1.0 / p));
  }
  std::sort(candidates.begin(), candidates.end());
  for (double c : candidates) {
    if (c < 1.0) continue;
    if (satisfied(c)) {
      GoodnessCertificate cert;
      cert.c = c;
      cert.coverage = coverage(c, nullptr);
      cert.exact = true;
      return cert;
    }
  }
  throw PreconditionError("no finite goodness constant (difference law has no mass off zero)");
}

GoodnessCertificate goodness_continuous(const NoiseDistribution& dist, double tol, std::size_t trials,
                                        const RandomSource& src) {
  require(trials >= 1000, "goodness certificate needs at least 1000 trials");
  std::vector<double> mags(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = src.engine(t);
    mags[t] = std::abs(dist.sample(rng) - dist.sample(rng));
  }
  std::sort(mags.begin(), mags.end());
  constexpr double z = 3.0;  // one-sided ~0.99865
  const double n = static_cast<double>(trials);
  for (double c = 1.0; c < 1e6; c *= 1.001) {
    const auto lo = std::lower_bound(mags.begin(), mags.end(), 1.0 / c);
    const auto hi = std::upper_bound(mags.begin(), mags.end(), c);
    const double p = static_cast<double>(hi - lo) / n;
    const double lower = p - z * std::sqrt(std::max(p * (1 - p), 1.0 / n) / n) - tol;
    if (lower >= 1.0 / c) {
      GoodnessCertificate cert;
      cert.c = c;
      cert.coverage = p;
      cert.exact = false;
      cert.confidence = 0.99865;
      cert.trials = trials;
      return cert;
    }
  }
  throw CapabilityError("no goodness certificate found below C = 1e6");
}

}  // namespace

GoodnessCertificate goodness_constant(const NoiseDistribution& dist, double tol, std::size_t trials,
                                      const RandomSource& src) {
  require(dist.variance() > 0.0, "goodness constant needs non-zero variance");
  if (dist.is_discrete()) return goodness_discrete(dist);
  return goodness_continuous(dist, tol, trials, src);
}

}  // namespace anticonc
