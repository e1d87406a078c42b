#include "anticonc/harness/battery.hpp"

#include <cmath>
#include <sstream>

#include "anticonc/concentration/checks.hpp"
#include "anticonc/core/errors.hpp"
#include "anticonc/counting/counting.hpp"
#include "anticonc/fourier/diophantine.hpp"
#include "anticonc/fourier/fourier.hpp"
#include "anticonc/harness/config.hpp"
#include "anticonc/matrix/singular.hpp"
#include "anticonc/matrix/smoothed.hpp"

namespace anticonc::battery {
namespace {

// Accumulates instance outcomes; keeps the first few failures verbatim.
struct Tally {
  CheckResult res;
  std::vector<std::string> notes;

  explicit Tally(std::string name) {
    res.name = std::move(name);
    res.instances = 0;
  }
  void add(bool pass, bool vacuous, const std::string& what) {
    ++res.instances;
    if (vacuous) ++res.vacuous;
    if (!pass) {
      ++res.failures;
      if (notes.size() < 5) notes.push_back(what);
    }
  }
  CheckResult finish(std::string summary = "") {
    res.pass = res.failures == 0 && res.instances > 0;
    std::string d = std::move(summary);
    for (const auto& n : notes) d += (d.empty() ? "" : "; ") + std::string("FAIL ") + n;
    res.detail = d;
    return res;
  }
};

std::string describe(std::span<const cplx> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_complex(v[i]);
  return s + ")";
}

NoiseDistribution random_discrete_law(Xoshiro256pp& rng) {
  switch (rng.below(3)) {
    case 0: return NoiseDistribution::rademacher();
    case 1: return NoiseDistribution::complex_bernoulli_symmetric();
    default: {
      const std::size_t k = 2 + rng.below(2);
      std::vector<long long> w(k);
      long long total = 0;
      for (auto& x : w) total += (x = 1 + static_cast<long long>(rng.below(4)));
      std::vector<Atom> atoms;
      for (std::size_t i = 0; i < k; ++i) {
        const cplx z(static_cast<double>(rng.below(5)) - 2, static_cast<double>(rng.below(3)) - 1);
        const Rational q(w[i], total);
        atoms.push_back({z, to_double(q), q});
      }
      return NoiseDistribution::from_atoms(std::move(atoms));
    }
  }
}

Rational central_binomial_ratio(unsigned n) {
  BigInt c = 1;
  for (unsigned k = 1; k <= n / 2; ++k) c = c * (n - n / 2 + k) / k;
  return Rational(c, BigInt(1) << n);
}

}  // namespace

CheckResult erdos_exhaustive(unsigned max_n, double r) {
  require(r >= 0 && r < 0.5, "erdos sweep needs r in [0, 1/2)");
  Tally t("erdos_exhaustive");
  const auto rad = NoiseDistribution::rademacher();
  for (unsigned n = 1; n <= max_n; ++n) {
    const Rational bound = central_binomial_ratio(n);
    std::size_t total = 1;
    for (unsigned i = 0; i < n; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      ComplexVec v(n);
      std::size_t c = code;
      for (auto& x : v) {
        x = static_cast<double>(1 + c % 3);
        c /= 3;
      }
      const auto est = lcf_exact(rad, v, r);
      const bool ok = est.exact_value ? *est.exact_value <= bound : est.value <= to_double(bound);
      bool pass = ok;
      if (code == 0) pass = ok && est.exact_value && *est.exact_value == bound;  // all-ones attains
      t.add(pass, false, describe(v) + " rho=" + format_number(est.value) + " bound=" + to_string(bound));
    }
  }
  return t.finish("n<=" + std::to_string(max_n) + ", r=" + format_number(r) + ", equality on all-ones");
}

CheckResult conditioning_random(std::size_t instances, std::uint64_t seed) {
  Tally t("conditioning_inequality");
  Xoshiro256pp rng(seed);
  for (std::size_t i = 0; i < instances; ++i) {
    const auto dist = random_discrete_law(rng);
    ComplexVec v(1 + rng.below(5));
    for (auto& x : v) x = cplx(static_cast<double>(rng.below(7)) - 3, static_cast<double>(rng.below(3)) - 1);
    const double r = 0.5 * static_cast<double>(rng.below(4));
    const cplx pivot = dist.atoms()[rng.below(dist.atoms().size())].value;
    ConditionEvent event = ConditionEvent::always();
    switch (rng.below(3)) {
      case 0: event = ConditionEvent::g_epsilon(0.05 + 0.1 * static_cast<double>(rng.below(5))); break;
      case 1: event = ConditionEvent::predicate([pivot](std::span<const cplx> d) { return d[0] == pivot; }); break;
      default: break;
    }
    const auto rep = conditioning_inequality_check(dist, v, r, event);
    t.add(rep.pass, rep.vacuous,
          dist.name() + " v=" + describe(v) + " lhs=" + format_number(rep.lhs) + " rhs=" + format_number(rep.rhs));
  }
  return t.finish("exact enumeration");
}

CheckResult perm_tail_random(std::size_t instances, std::size_t trials, std::uint64_t seed) {
  Tally t("perm_tail");
  Xoshiro256pp rng(seed);
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t n = 4 + rng.below(29);
    ComplexVec v(n), w(n);
    for (auto& x : v) x = cplx(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
    for (auto& x : w) x = cplx(2 * rng.uniform() - 1, 0.0);
    const double wn = norm2(w);
    for (auto& x : w) x /= wn;
    cplx s = 0;
    for (auto x : w) s += x;
    // non-vacuous: 4 exp(-t^2 / 128) < 1 needs t > sqrt(128 ln 4) ~ 13.32
    const double tt = std::max(std::abs(s), 13.4 + 6.0 * rng.uniform());
    const auto rep = perm_tail_check(v, w, tt, trials, RandomSource(seed, i));
    t.add(rep.pass && !rep.vacuous, rep.vacuous,
          "n=" + std::to_string(n) + " t=" + format_number(tt) + " emp=" + format_number(rep.empirical) +
              " bound=" + format_number(rep.bound));
  }
  return t.finish("unit-norm w, t in [13.4, 19.4]");
}

CheckResult shift_subgaussian_random(std::size_t instances, std::size_t trials, std::uint64_t seed) {
  Tally t("shift_subgaussian");
  Xoshiro256pp rng(seed);
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t n = 1 + rng.below(4);
    ComplexVec a(n), b(n);
    for (std::size_t j = 0; j < n; ++j) {
      a[j] = cplx(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
      b[j] = a[j] + 0.05 * cplx(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
    }
    const double r1 = 0.25 + rng.uniform(), r2 = 0.1 + 0.4 * rng.uniform();
    const auto rep = shift_bound_subgaussian_check(a, b, r1, r2, trials, RandomSource(seed, i));
    t.add(rep.pass, rep.vacuous,
          "a=" + describe(a) + " shifted=" + format_number(rep.rho_shifted) + " rhs=" + format_number(rep.rhs));
  }
  return t.finish("common random numbers");
}

CheckResult majorization_exhaustive(unsigned max_n, const std::vector<double>& radii) {
  Tally t("fourier_majorization");
  const auto rad = NoiseDistribution::rademacher();
  for (unsigned n = 1; n <= max_n; ++n) {
    std::size_t total = 1;
    for (unsigned i = 0; i < n; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      ComplexVec v(n);
      std::size_t c = code;
      for (auto& x : v) {
        x = static_cast<double>(c % 3);
        c /= 3;
      }
      for (double r : radii) {
        const auto rep = fourier_majorization_check(v, rad, r);
        t.add(rep.pass, rep.majorant >= 1.0,
              describe(v) + " r=" + format_number(r) + " rho=" + format_number(rep.rho) +
                  " majorant=" + format_number(rep.majorant));
      }
    }
  }
  return t.finish("{0,1,2}^n, n<=" + std::to_string(max_n) + ", tolerance 1e-12");
}

CheckResult doubling_random(std::size_t instances, std::uint64_t seed) {
  Tally t("doubling");
  Xoshiro256pp rng(seed);
  for (std::size_t i = 0; i < instances; ++i) {
    const auto dist = random_discrete_law(rng);
    ComplexVec v(1 + rng.below(3)), w(1 + rng.below(3));
    for (auto& c : v) c = cplx(static_cast<double>(rng.below(7)) - 3, static_cast<double>(rng.below(3)) - 1);
    for (auto& c : w) c = cplx(static_cast<double>(rng.below(7)) - 3, static_cast<double>(rng.below(3)) - 1);
    const auto rep = doubling_check(v, w, dist);
    t.add(rep.pass, false,
          dist.name() + " v=" + describe(v) + " w=" + describe(w) + " pv*pw=" + format_number(rep.pv * rep.pw) +
              " pvw=" + format_number(rep.pvw));
  }
  return t.finish("exact enumeration");
}

CheckResult diophantine_constructed(std::size_t instances, std::size_t trials, std::uint64_t seed) {
  Tally t("diophantine_soundness");
  const auto rad = NoiseDistribution::rademacher();
  const double f = 0.03, g = 35.0;
  Xoshiro256pp rng(seed);
  std::size_t attempts = 0, certified = 0;
  while (t.res.instances < instances) {
    require(++attempts <= 20 * instances, "could not construct certified vectors");
    // Alternate long vectors (non-vacuous bound) with short ones (vacuous bound).
    const bool long_vec = t.res.instances % 2 == 0;
    const std::size_t n = long_vec ? 600 : 50;
    const double alpha = long_vec ? 6.5 : 1.6;
    const double r = long_vec ? 0.0 : 0.5;
    ComplexVec v(n);
    // Magnitudes spread over [1, 26]: a narrow band such as [12, 15] sits
    // close to the lattice at eta ~ 1 / 13.5 and never certifies.
    for (auto& x : v) x = (rng.below(2) ? 1.0 : -1.0) * (1.0 + 25.0 * rng.uniform());
    const auto search = annulus_search(v, f, g, alpha);
    if (search.status != AnnulusStatus::certified_clear) continue;
    ++certified;
    const auto rep = diophantine_soundness_check(v, rad, f, g, alpha, r, trials, RandomSource(seed, attempts));
    t.add(rep.pass || rep.bound.vacuous, rep.bound.vacuous,
          "n=" + std::to_string(n) + " rho=" + format_number(rep.lcf.value) + " bound=" + format_number(rep.bound.value));
  }
  return t.finish("f=0.03, g=35, " + std::to_string(certified) + " certified of " + std::to_string(attempts) +
                  " constructed");
}

CheckResult lemma16_exhaustive(const std::vector<Rational>& alphas) {
  Tally t("lemma16");
  for (std::uint32_t code = 0; code < 81; ++code) {
    const FpVector v(3, std::vector<FpElem>{{code % 3, code / 3 % 3}, {code / 9 % 3, code / 27}});
    for (const auto& a : alphas) {
      const auto rep = lemma16_check(v, 1, a);
      t.add(rep.pass, false,
            v.to_string() + " alpha=" + to_string(a) + " lhs=" + rep.lhs.str() + " rhs=" + rep.rhs.str());
    }
  }
  return t.finish("(F_3+iF_3)^2, k=1");
}

CheckResult counting_lemma_grid(const std::vector<std::uint32_t>& primes, const std::vector<unsigned>& ks,
                                const std::vector<Rational>& ts, const std::vector<Rational>& alphas) {
  Tally t("counting_lemma");
  for (auto p : primes)
    for (auto k : ks)
      for (const auto& tt : ts)
        for (const auto& a : alphas) {
          const auto rep = counting_lemma_verify(2, p, k, 1, tt, a);
          t.add(rep.pass, rep.vacuous,
                "p=" + std::to_string(p) + " k=" + std::to_string(k) + " t=" + to_string(tt) + " alpha=" +
                    to_string(a) + " card=" + rep.card.str() + " bound=" + to_string(rep.bound));
        }
  return t.finish("n=2, s=1, exact");
}

CheckResult cauchy_davenport_random(std::size_t instances, const std::vector<std::uint32_t>& primes,
                                    std::uint64_t seed) {
  Tally t("cauchy_davenport");
  Xoshiro256pp rng(seed);
  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint32_t p = primes[rng.below(primes.size())];
    auto draw = [&] {
      std::vector<FpElem> s(1 + rng.below(p * p));
      for (auto& x : s) x = {static_cast<std::uint32_t>(rng.below(p)), static_cast<std::uint32_t>(rng.below(p))};
      return s;
    };
    const auto a = draw(), b = draw();
    const auto rep = cauchy_davenport_check(a, b, p);
    t.add(rep.pass, rep.rhs <= 1,
          "p=" + std::to_string(p) + " |A+B|=" + std::to_string(rep.lhs) + " rhs=" + std::to_string(rep.rhs));
  }
  return t.finish("random subsets of F_p^2");
}

CheckResult sumset_iteration_random(std::size_t instances, const std::vector<std::uint32_t>& primes,
                                    unsigned max_t, std::uint64_t seed) {
  Tally t("sumset_iteration");
  Xoshiro256pp rng(seed);
  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint32_t p = primes[rng.below(primes.size())];
    std::vector<FpElem> e(1 + rng.below(4));
    for (auto& x : e) x = {static_cast<std::uint32_t>(rng.below(p)), static_cast<std::uint32_t>(rng.below(p))};
    const FpVector v(p, e);
    const std::uint64_t mask = 1 + rng.below((std::uint64_t{1} << e.size()) - 1);
    const Rational m(static_cast<long long>(1 + rng.below(20)), 200);
    const unsigned tt = 1 + static_cast<unsigned>(rng.below(max_t));
    const auto rep = sumset_iteration_check(v, mask, m, tt, Rational(1));
    t.add(rep.included && rep.pass, false,
          v.to_string() + " t=" + std::to_string(tt) + " m=" + to_string(m));
  }
  return t.finish("exact inclusion");
}

CheckResult tail_bound(const std::string& name, const std::string& matrix, const std::vector<std::size_t>& ns,
                       const std::vector<double>& etas, double factor, std::size_t trials, std::uint64_t seed) {
  Tally t(name);
  const auto gauss = NoiseDistribution::standard_complex_gaussian();
  std::ostringstream summary;
  for (std::size_t n : ns) {
    const auto curve = tail_curve(build_matrix(matrix, n), gauss, etas, trials, RandomSource(seed, n), matrix);
    for (std::size_t k = 0; k < curve.etas.size(); ++k) {
      const double emp = curve.empirical(k);
      const double ci = binomial_ci95(emp, curve.trials);
      const double bound = factor * std::sqrt(static_cast<double>(n)) * curve.etas[k];
      const std::string what = "n=" + std::to_string(n) + " eta=" + format_number(curve.etas[k]) +
                               " emp=" + format_number(emp) + " bound=" + format_number(bound);
      summary << (summary.tellp() > 0 ? " " : "") << '[' << what << ']';
      t.add(emp <= bound + 3 * ci, bound >= 1.0, what);
    }
  }
  return t.finish(summary.str());
}

CheckResult good_rows_random(std::size_t matrices, std::size_t n, double eps, std::uint64_t seed) {
  Tally t("good_rows");
  const auto rad = NoiseDistribution::rademacher();
  const ComplexMatrix zero(n, n);
  const double cap = 2 * std::pow(static_cast<double>(n), 1 - eps);
  std::size_t worst = 0;
  for (std::size_t i = 0; i < matrices; ++i) {
    const auto rows = good_row_classify(perturbed_matrix(zero, rad, RandomSource(seed), i), eps);
    worst = std::max(worst, rows.bad_count());
    t.add(static_cast<double>(rows.bad_count()) <= cap, false, "matrix " + std::to_string(i));
  }
  return t.finish("n=" + std::to_string(n) + " eps=" + format_number(eps) + " max |I^c|=" +
                  std::to_string(worst) + " cap=" + format_number(cap));
}

CheckResult operator_norm_tail(std::size_t n, double l, std::size_t trials, std::uint64_t seed) {
  Tally t("operator_norm_tail");
  for (const auto& dist : {NoiseDistribution::rademacher(), NoiseDistribution::standard_complex_gaussian()}) {
    const auto rep = operator_norm_tail_check(dist, n, l, trials, RandomSource(seed));
    t.add(rep.pass, rep.bound >= 1.0,
          dist.name() + " rate=" + format_number(rep.frobenius_rate) + " bound=" + format_number(rep.bound));
  }
  return t.finish("n=" + std::to_string(n) + " L=" + format_number(l));
}

CheckResult svd_consistency(std::size_t instances, std::size_t max_n, std::uint64_t seed) {
  Tally t("svd_consistency");
  const auto gauss = NoiseDistribution::standard_complex_gaussian();
  Xoshiro256pp rng(seed);
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t n = 1 + rng.below(max_n);
    const auto a = perturbed_matrix(ComplexMatrix(n, n), gauss, RandomSource(seed, 1), i);
    const double s = smallest_singular_value(a);
    const auto all = singular_values(a);
    const double top = all.back();
    bool ok = std::abs(s - all.front()) <= 1e-8 * std::max(1.0, top);
    // variational: s_min <= |A x| / |x| for any x
    for (int probe = 0; probe < 4 && ok; ++probe) {
      ComplexVec x(n);
      for (auto& c : x) c = cplx(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
      double ax = 0;
      for (std::size_t r = 0; r < n; ++r) {
        cplx acc = 0;
        for (std::size_t c = 0; c < n; ++c) acc += a(r, c) * x[c];
        ax += std::norm(acc);
      }
      ok = s <= std::sqrt(ax) / norm2(x) * (1 + 1e-10);
    }
    t.add(ok, false, "n=" + std::to_string(n) + " s_min=" + format_number(s));
  }
  return t.finish("n<=" + std::to_string(max_n));
}

}  // namespace anticonc::battery
