#include "anticonc/fourier/diophantine.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "anticonc/core/parallel.hpp"
#include "anticonc/fourier/fourier.hpp"

namespace anticonc {
namespace {

double dist_sq(cplx eta, std::span<const cplx> v) {
  double acc = 0.0;
  for (const cplx c : v) {
    const cplx z = eta * c;
    const double dr = z.real() - std::round(z.real());
    const double di = z.imag() - std::round(z.imag());
    acc += dr * dr + di * di;
  }
  return acc;
}

struct ScanBest {
  double min = std::numeric_limits<double>::infinity();
  cplx eta;
  void take(double d, cplx e) {
    if (d < min) {
      min = d;
      eta = e;
    }
  }
};

// Nodes lo, lo + step, ..., hi with spacing <= delta.
std::size_t node_count(double lo, double hi, double delta) {
  return static_cast<std::size_t>(std::ceil((hi - lo) / delta)) + 1;
}

double node(double lo, double hi, std::size_t k, std::size_t count) {
  return count == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
}

// Real eta in [lo, hi]; `inner` tracks the nodes that also lie in [f, g].
void scan_real(std::span<const cplx> v, double lo, double hi, double f, double delta,
               ScanBest& all, ScanBest& inner, std::size_t& points) {
  const std::size_t count = node_count(lo, hi, delta);
  std::vector<double> d(count);
  parallel_for(count, [&](std::size_t k) { d[k] = dist_sq(node(lo, hi, k, count), v); });
  for (std::size_t k = 0; k < count; ++k) {
    const double x = node(lo, hi, k, count);
    all.take(d[k], x);
    if (x >= f) inner.take(d[k], x);
  }
  points += count;
}

// Quadrant 0 <= arg < pi/2 of the annulus; eta -> i eta covers the rest.
void scan_annulus(std::span<const cplx> v, double f, double g, double delta, std::size_t max_points,
                  ScanBest& best, std::size_t& points) {
  const std::size_t nr = node_count(f, g, delta);
  const auto nt = static_cast<std::size_t>(std::ceil(0.5 * std::numbers::pi * g / delta));
  if (static_cast<double>(nr) * static_cast<double>(nt) > static_cast<double>(max_points)) {
    std::ostringstream msg;
    msg << "annulus_search: grid of " << nr << " x " << nt << " points exceeds the budget of "
        << max_points;
    throw CapabilityError(msg.str());
  }
  std::vector<ScanBest> rows(nr);
  parallel_for(nr, [&](std::size_t k) {
    const double rho = node(f, g, k, nr);
    for (std::size_t j = 0; j < nt; ++j) {
      const double theta = 0.5 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(nt);
      const cplx eta = std::polar(rho, theta);
      rows[k].take(dist_sq(eta, v), eta);
    }
  });
  for (const auto& r : rows) best.take(r.min, r.eta);
  points += nr * nt;
}

// Least-squares polish around a grid point: eta = <v, m> / <v, v> for the
// rounded lattice point m, kept only if it stays admissible and improves.
DiophantineWitness polish(std::span<const cplx> v, cplx eta, double f, double g, bool real_only) {
  double best = dist_sq(eta, v);
  const double vv = norm2(v) * norm2(v);
  for (int it = 0; it < 3; ++it) {
    cplx num{};
    for (const cplx c : v) num += std::conj(c) * nearest_gaussian_int(eta * c).value();
    cplx cand = num / vv;
    if (real_only) cand = cand.real();
    const double mod = std::abs(cand);
    if (mod < f || mod > g) break;
    const double d = dist_sq(cand, v);
    if (!(d < best)) break;
    best = d;
    eta = cand;
  }
  DiophantineWitness w;
  w.eta = eta;
  ComplexVec scaled(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = eta * v[i];
  LatticeDistance ld = lattice_dist(scaled);
  w.lattice_point = std::move(ld.point);
  w.distance = ld.distance;
  return w;
}

}  // namespace

LatticeDistance lattice_dist(std::span<const cplx> v) {
  LatticeDistance out;
  out.point.reserve(v.size());
  double acc = 0.0;
  for (const cplx c : v) {
    const GaussInt m = nearest_gaussian_int(c);
    acc += std::norm(c - m.value());
    out.point.push_back(m);
  }
  out.distance = std::sqrt(acc);
  return out;
}

std::string to_string(AnnulusStatus s) {
  switch (s) {
    case AnnulusStatus::witness: return "witness";
    case AnnulusStatus::certified_clear: return "certified-clear";
    case AnnulusStatus::undecided: return "undecided";
  }
  return "?";
}

AnnulusResult annulus_search(std::span<const cplx> v, double f, double g, double alpha,
                             const AnnulusOptions& opts) {
  require(f > 0 && f <= g, "annulus_search: need 0 < f <= g");
  require(alpha > 0, "annulus_search: alpha must be > 0");
  require(std::isfinite(g) && all_finite(v), "annulus_search: non-finite input");
  const double len = norm2(v);
  if (!(len > 0)) throw PreconditionError("annulus_search: v must be nonzero");
  const bool real_v = is_real_vector(v);

  AnnulusResult res;
  double delta = alpha / (4.0 * len);
  for (int level = 0; level <= opts.refinements; ++level, delta *= 0.5) {
    res.step = delta;
    ScanBest best;
    double lower = 0.0;
    if (opts.real_eta_only || real_v) {
      // Real v: dist(eta v)^2 = D(Re eta)^2 + D(Im eta)^2 with |Re| or |Im|
      // in [f / sqrt 2, g], so min over that interval bounds the annulus.
      const double lo = opts.real_eta_only ? f : f / std::numbers::sqrt2;
      ScanBest all;
      scan_real(v, lo, g, f, delta, all, best, res.grid_points);
      lower = std::sqrt(all.min) - 0.5 * len * delta;
      res.used_real_reduction = !opts.real_eta_only;
      const bool decided = std::sqrt(best.min) < 0.5 * alpha || lower >= 0.5 * alpha;
      if (!decided && !opts.real_eta_only) {
        best = ScanBest{};
        scan_annulus(v, f, g, delta, opts.max_points, best, res.grid_points);
        lower = std::sqrt(best.min) - len * delta;
        res.used_real_reduction = false;
      }
    } else {
      scan_annulus(v, f, g, delta, opts.max_points, best, res.grid_points);
      lower = std::sqrt(best.min) - len * delta;
    }
    res.grid_min = std::sqrt(best.min);
    res.best = polish(v, best.eta, f, g, opts.real_eta_only);
    if (res.best.distance < 0.5 * alpha) {
      res.status = AnnulusStatus::witness;
      return res;
    }
    if (lower >= 0.5 * alpha) {
      res.status = AnnulusStatus::certified_clear;
      res.certified_lower_bound = lower;
      return res;
    }
  }
  res.status = AnnulusStatus::undecided;
  return res;
}

DiophantineBound refined_diophantine_bound(double f, double g, double alpha, double r, double c_xi) {
  require(c_xi >= 1, "refined_diophantine_bound: c_xi must be >= 1");
  require(f > 0 && f < 1, "refined_diophantine_bound: f must lie in (0, 1)");
  require(g > 1, "refined_diophantine_bound: g must be > 1");
  require(alpha > 0, "refined_diophantine_bound: alpha must be > 0");
  require(r >= 0, "refined_diophantine_bound: r must be >= 0");
  DiophantineBound b;
  b.term_alpha = 100.0 * std::exp(-alpha * alpha / (2.0 * c_xi));
  b.term_f = 10.0 * c_xi * c_xi * f * f;
  b.term_g = 100.0 * std::exp(-g * g / (20.0 * c_xi * c_xi));
  b.value = std::numbers::sqrt2 * std::exp(std::numbers::pi * r * r) *
            std::sqrt(b.term_alpha + b.term_f + b.term_g);
  b.vacuous = b.value >= 1.0;
  return b;
}

DiophantineSoundnessReport diophantine_soundness_check(std::span<const cplx> v,
                                                       const NoiseDistribution& dist, double f,
                                                       double g, double alpha, double r,
                                                       std::size_t trials, const RandomSource& src) {
  DiophantineSoundnessReport rep;
  rep.search = annulus_search(v, f, g, alpha);
  if (rep.search.status != AnnulusStatus::certified_clear) {
    std::ostringstream msg;
    msg << "diophantine_soundness_check: annulus hypothesis not certified ("
        << to_string(rep.search.status) << ", best eta " << format_complex(rep.search.best.eta)
        << " at distance " << rep.search.best.distance << ")";
    throw PreconditionError(msg.str());
  }
  rep.c_xi = goodness_constant(dist).c;
  rep.alpha_certified = rep.search.certified_lower_bound;
  rep.bound = refined_diophantine_bound(f, g, rep.alpha_certified, r, rep.c_xi);
  rep.lcf = lcf_monte_carlo(dist, v, r, trials, src);
  rep.pass = rep.bound.vacuous || rep.lcf.value <= rep.bound.value + 3.0 * rep.lcf.ci95;
  return rep;
}

ScaleSearch integer_approx_at_scale(std::span<const cplx> a, double eta, double s_scale,
                                    double f_beta, int j, double d_max, double l2_budget) {
  require(eta > 0 && s_scale > 0 && f_beta > 0, "integer_approx_at_scale: eta, S, f_beta must be > 0");
  require(f_beta <= d_max, "integer_approx_at_scale: need f_beta <= d_max");
  require(l2_budget > 0, "integer_approx_at_scale: l2_budget must be > 0");
  if (!(norm2(a) > 0)) throw PreconditionError("integer_approx_at_scale: a must be nonzero");
  const double n = static_cast<double>(a.size());
  const double scale = 1.0 / (2.0 * eta * std::sqrt(n)) * std::pow(2.0 * s_scale / f_beta, -j);
  ComplexVec w(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) w[i] = scale * a[i];

  ScaleSearch out;
  out.search = annulus_search(w, f_beta, d_max, 2.0 * l2_budget);
  const DiophantineWitness& best = out.search.best;
  out.best_residual = best.distance;
  if (best.distance < l2_budget) {
    ScaleApproximation ap;
    ap.d = best.eta;
    ap.v_prime = best.lattice_point;
    ap.residual_l2 = best.distance;
    ap.j = j;
    out.approx = std::move(ap);
  }
  return out;
}

}  // namespace anticonc
