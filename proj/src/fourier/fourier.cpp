#include "anticonc/fourier/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "anticonc/core/parallel.hpp"

namespace anticonc {
namespace {

constexpr double kPi = std::numbers::pi;

double frac_dist(double x) { return std::abs(x - std::round(x)); }

// Pr(a <= Z <= b) for standard normal Z, stable in both tails.
double normal_mass(double a, double b) {
  if (a >= 0) return 0.5 * (std::erfc(a / std::numbers::sqrt2) - std::erfc(b / std::numbers::sqrt2));
  if (b <= 0) return 0.5 * (std::erfc(-b / std::numbers::sqrt2) - std::erfc(-a / std::numbers::sqrt2));
  return 1.0 - 0.5 * std::erfc(-a / std::numbers::sqrt2) - 0.5 * std::erfc(b / std::numbers::sqrt2);
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

// E ||X||_{R/Z}^2 for X ~ N(0, s^2).
double gaussian_frac_sq(double s) {
  if (s == 0.0) return 0.0;
  if (s > 0.4) {
    // Fourier series of the periodic function ||x||^2 smoothed by the gaussian.
    double acc = 1.0 / 12.0;
    for (int k = 1; k < 1000; ++k) {
      const double term = std::exp(-2.0 * kPi * kPi * k * k * s * s) / (kPi * kPi * k * k);
      acc += (k % 2 ? -term : term);
      if (term < 1e-18) break;
    }
    return acc;
  }
  // Sum over integer cells m: E[(X - m)^2 ; |X - m| <= 1/2].
  const int mmax = static_cast<int>(std::ceil(9.0 * s)) + 1;
  double acc = 0.0;
  for (int m = -mmax; m <= mmax; ++m) {
    const double mu = -m;  // Y = X - m ~ N(mu, s^2)
    const double a = (-0.5 - mu) / s;
    const double b = (0.5 - mu) / s;
    const double mass = normal_mass(a, b);
    const double first = normal_pdf(a) - normal_pdf(b);
    const double second = mass - (b * normal_pdf(b) - a * normal_pdf(a));
    acc += mu * mu * mass + 2.0 * mu * s * first + s * s * second;
  }
  return acc;
}

struct XiNorm {
  // Discrete: difference atoms; continuous: spread of Re{w d} per unit |w|.
  std::vector<std::pair<cplx, double>> atoms;
  bool gaussian = false;
  double sigma = 0.0;

  explicit XiNorm(const NoiseDistribution& dist) {
    if (dist.is_discrete()) {
      const NoiseDistribution diff = difference_distribution(dist);
      for (const auto& a : diff.atoms())
        if (a.value != cplx{}) atoms.emplace_back(a.value, a.prob);
    } else {
      gaussian = true;
      sigma = std::sqrt(dist.gaussian_variance());
    }
  }

  double operator()(cplx w) const {
    if (gaussian) return gaussian_frac_sq(std::abs(w) * sigma);
    double acc = 0.0;
    for (const auto& [d, p] : atoms) {
      const double x = frac_dist((w * d).real());
      acc += p * x * x;
    }
    return acc;
  }
};

}  // namespace

double xi_norm_sq(cplx w, const NoiseDistribution& dist) { return XiNorm(dist)(w); }

double p_xi_exact(std::span<const cplx> v, const NoiseDistribution& dist, std::size_t budget) {
  if (!dist.is_discrete())
    throw CapabilityError("exact P_xi needs a discrete law; use the Monte Carlo path");
  const SumLaw law = sum_law(lazy_difference_distribution(dist), v, budget);
  double acc = 0.0;
  for (std::size_t k = 0; k < law.size(); ++k) acc += law.prob[k] * std::exp(-kPi * std::norm(law.points[k]));
  return acc;
}

MonteCarloValue p_xi_monte_carlo(std::span<const cplx> v, const NoiseDistribution& dist,
                                 std::size_t trials, const RandomSource& src) {
  require(trials >= 2, "p_xi_monte_carlo: need at least 2 trials");
  std::vector<double> vals(trials);
  parallel_for(trials, [&](std::size_t t) {
    auto rng = src.engine(t);
    cplx s{};
    for (const cplx c : v) {
      const cplx d = dist.sample(rng) - dist.sample(rng);
      if ((rng() >> 63) != 0) s += c * d;
    }
    vals[t] = std::exp(-kPi * std::norm(s));
  });
  double mean = 0.0;
  for (double x : vals) mean += x;
  mean /= static_cast<double>(trials);
  double var = 0.0;
  for (double x : vals) var += (x - mean) * (x - mean);
  var /= static_cast<double>(trials - 1);
  return {mean, 1.96 * std::sqrt(var / static_cast<double>(trials)), trials};
}

MajorizationReport fourier_majorization_check(std::span<const cplx> v, const NoiseDistribution& dist,
                                              double r) {
  require(r >= 0, "fourier_majorization_check: r must be >= 0");
  MajorizationReport rep;
  rep.rho = lcf_exact(dist, v, r).value;
  rep.p_xi = p_xi_exact(v, dist);
  rep.majorant = std::exp(kPi * r * r) * rep.p_xi;
  rep.pass = rep.rho <= rep.majorant + 1e-12;
  return rep;
}

DoublingReport doubling_check(std::span<const cplx> v, std::span<const cplx> w,
                              const NoiseDistribution& dist) {
  DoublingReport rep;
  rep.pv = p_xi_exact(v, dist);
  rep.pw = p_xi_exact(w, dist);
  ComplexVec vw(v.begin(), v.end());
  vw.insert(vw.end(), w.begin(), w.end());
  rep.pvw = p_xi_exact(vw, dist);
  rep.pass = rep.pv * rep.pw <= 2.0 * rep.pvw + 1e-12;
  return rep;
}

namespace {

template <int N>
struct GaussLegendre;
template <>
struct GaussLegendre<5> {
  static constexpr double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                  0.9061798459386640};
  static constexpr double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                  0.4786286704993665, 0.2369268850561891};
};
template <>
struct GaussLegendre<7> {
  static constexpr double x[7] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
                                  0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
  static constexpr double w[7] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                                  0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                                  0.1294849661688697};
};

template <int N, class F>
double tensor_rule(const F& fn, double x0, double y0, double h) {
  const double c = 0.5 * h;
  double acc = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      acc += GaussLegendre<N>::w[i] * GaussLegendre<N>::w[j] *
             fn(x0 + c * (1 + GaussLegendre<N>::x[i]), y0 + c * (1 + GaussLegendre<N>::x[j]));
  return acc * c * c;
}

struct Cell {
  double x0, y0, h, value, error;
  bool operator<(const Cell& o) const { return error < o.error; }
};

}  // namespace

QuadratureResult esseen_integral_majorant(std::span<const cplx> v, const NoiseDistribution& dist,
                                          double quad_tol, std::size_t max_cells) {
  require(quad_tol > 0, "esseen_integral_majorant: quad_tol must be > 0");
  const XiNorm norm(dist);
  const ComplexVec coeffs(v.begin(), v.end());
  auto integrand = [&](double x, double y) {
    const cplx z{x, y};
    double s = 0.0;
    for (const cplx c : coeffs) s += norm(c * z);
    return std::exp(-0.5 * s - kPi * std::norm(z));
  };
  auto make = [&](double x0, double y0, double h) {
    const double hi = tensor_rule<7>(integrand, x0, y0, h);
    const double lo = tensor_rule<5>(integrand, x0, y0, h);
    return Cell{x0, y0, h, hi, std::abs(hi - lo)};
  };

  const double half = std::sqrt(std::log(1e16) / kPi);
  constexpr int kInitial = 16;
  const double h0 = 2.0 * half / kInitial;
  std::priority_queue<Cell> heap;
  double total = 0.0, err = 0.0;
  for (int i = 0; i < kInitial; ++i)
    for (int j = 0; j < kInitial; ++j) {
      Cell c = make(-half + i * h0, -half + j * h0, h0);
      total += c.value;
      err += c.error;
      heap.push(c);
    }
  std::size_t cells = heap.size();
  while (err > quad_tol && cells < max_cells) {
    const Cell c = heap.top();
    heap.pop();
    total -= c.value;
    err -= c.error;
    const double h = 0.5 * c.h;
    for (int k = 0; k < 4; ++k) {
      Cell child = make(c.x0 + (k & 1) * h, c.y0 + (k >> 1) * h, h);
      total += child.value;
      err += child.error;
      heap.push(child);
    }
    cells += 3;
    if (cells % 4096 == 0) {
      // Recompute the running sums to keep rounding drift out of the stop rule.
      auto copy = heap;
      total = err = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        err += copy.top().error;
        copy.pop();
      }
    }
  }
  QuadratureResult res{total, std::max(err, 0.0), cells};
  if (err > quad_tol) {
    std::ostringstream msg;
    msg << "esseen_integral_majorant: tolerance " << quad_tol << " not met within " << max_cells
        << " cells (partial value " << total << ", error estimate " << err << ")";
    throw QuadratureError(msg.str(), res);
  }
  return res;
}

}  // namespace anticonc
