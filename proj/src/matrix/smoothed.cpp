#include "anticonc/matrix/smoothed.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anticonc/core/errors.hpp"
#include "anticonc/core/parallel.hpp"
#include "anticonc/matrix/singular.hpp"

namespace anticonc {

ComplexMatrix perturbed_matrix(const ComplexMatrix& m, const NoiseDistribution& dist,
                               const RandomSource& src, std::uint64_t trial) {
  ComplexMatrix out = m;
  auto rng = src.engine(trial);
  std::vector<cplx> noise(m.rows() * m.cols());
  dist.sample(rng, noise);
  auto data = out.data();
  for (std::size_t k = 0; k < noise.size(); ++k) data[k] += noise[k];
  return out;
}

TailCurve tail_curve(const ComplexMatrix& m, const NoiseDistribution& dist, std::vector<double> etas,
                     std::size_t trials, const RandomSource& src, std::string matrix_id) {
  require(trials >= 100, "tail_curve: need at least 100 trials");
  require(m.square() && m.rows() > 0, "tail_curve: M must be square and nonempty");
  require(!etas.empty(), "tail_curve: empty eta grid");
  std::sort(etas.begin(), etas.end());
  std::vector<double> s(trials);
  parallel_for(trials, [&](std::size_t t) { s[t] = smallest_singular_value(perturbed_matrix(m, dist, src, t)); });
  std::sort(s.begin(), s.end());
  TailCurve curve;
  curve.hits.reserve(etas.size());
  for (double eta : etas)
    curve.hits.push_back(static_cast<std::uint64_t>(std::upper_bound(s.begin(), s.end(), eta) - s.begin()));
  curve.etas = std::move(etas);
  curve.trials = trials;
  curve.n = m.rows();
  curve.dist_id = dist.name();
  curve.matrix_id = std::move(matrix_id);
  curve.seed = src.seed();
  return curve;
}

std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::edelman: return "edelman";
    case BoundKind::sst: return "sst";
    case BoundKind::theorem13: return "theorem13";
  }
  return "?";
}

BoundKind parse_bound_kind(const std::string& s) {
  if (s == "edelman") return BoundKind::edelman;
  if (s == "sst") return BoundKind::sst;
  if (s == "theorem13") return BoundKind::theorem13;
  throw PreconditionError("unknown bound kind '" + s + "' (edelman, sst, theorem13)");
}

double reference_bound(BoundKind kind, const BoundParams& p) {
  switch (kind) {
    case BoundKind::edelman:
      require(p.n > 0 && p.eta >= 0, "edelman bound needs n > 0, eta >= 0");
      return std::sqrt(static_cast<double>(p.n)) * p.eta;
    case BoundKind::sst:
      require(p.n > 0 && p.eta >= 0, "sst bound needs n > 0, eta >= 0");
      return 2.35 * std::sqrt(static_cast<double>(p.n)) * p.eta;
    case BoundKind::theorem13:
      require(p.alpha > 0 && p.alpha <= 1 && p.c > 0, "theorem13 bound needs alpha in (0,1], C > 0");
      return p.c * p.alpha;
  }
  return 0.0;
}

Threshold theorem13_threshold(double alpha, double norm_m, std::size_t n, double c) {
  require(alpha > 0 && alpha <= 1, "theorem13_threshold: alpha must lie in (0, 1]");
  require(norm_m >= 0, "theorem13_threshold: |M| must be >= 0");
  require(n >= 2, "theorem13_threshold: n must be >= 2");
  require(c >= 1, "theorem13_threshold: C must be >= 1");
  const double nd = static_cast<double>(n);
  const double exponent = -300.0 * std::log(1.0 / alpha) / std::log(nd);
  const double base_log = std::log(c) + std::log(norm_m + std::sqrt(nd)) - std::log(alpha) + 2.0 * std::log(nd);
  Threshold t;
  t.log_value = exponent == 0.0 ? 0.0 : exponent * base_log;
  t.log10_value = t.log_value / std::log(10.0);
  t.value = std::exp(t.log_value);
  return t;
}

OperatorNormTailReport operator_norm_tail_check(const NoiseDistribution& dist, std::size_t n, double l,
                                                std::size_t trials, const RandomSource& src) {
  require(l >= 1, "operator_norm_tail_check: L must be >= 1");
  require(n >= 1 && trials >= 1, "operator_norm_tail_check: need n >= 1 and trials >= 1");
  const bool exact_norm = n <= 50;
  const ComplexMatrix zero(n, n);
  std::vector<double> frob(trials), op(exact_norm ? trials : 0);
  parallel_for(trials, [&](std::size_t t) {
    const ComplexMatrix nm = perturbed_matrix(zero, dist, src, t);
    frob[t] = nm.frobenius_norm();
    if (exact_norm) op[t] = operator_norm(nm);
  });
  OperatorNormTailReport rep;
  rep.threshold = std::sqrt(l) * static_cast<double>(n);
  rep.bound = 1.0 / l;
  rep.trials = trials;
  auto rate = [&](const std::vector<double>& xs) {
    const auto k = std::count_if(xs.begin(), xs.end(), [&](double x) { return x >= rep.threshold; });
    return static_cast<double>(k) / static_cast<double>(trials);
  };
  double sq = 0.0;
  for (double f : frob) sq += f * f;
  rep.mean_frobenius_sq = sq / static_cast<double>(trials);
  rep.frobenius_rate = rate(frob);
  rep.frobenius_ci = binomial_ci95(rep.frobenius_rate, trials);
  rep.pass = rep.frobenius_rate <= rep.bound + 3 * rep.frobenius_ci;
  if (exact_norm) {
    rep.operator_rate = rate(op);
    rep.operator_ci = binomial_ci95(*rep.operator_rate, trials);
    rep.pass = rep.pass && *rep.operator_rate <= rep.bound + 3 * *rep.operator_ci;
  }
  return rep;
}

std::size_t RowClassification::bad_count() const noexcept { return n - good_rows.size(); }

RowClassification good_row_classify(const ComplexMatrix& n_mat, double epsilon) {
  require(epsilon > 0 && epsilon < 0.5, "good_row_classify: epsilon must lie in (0, 1/2)");
  const double n = static_cast<double>(n_mat.cols());
  const double norm_cap = std::pow(n, 1 + 2 * epsilon);
  const double sum_cap = std::pow(n, 0.5 + epsilon);
  RowClassification out;
  out.epsilon = epsilon;
  out.n = n_mat.rows();
  for (std::size_t i = 0; i < n_mat.rows(); ++i) {
    double sq = 0.0;
    cplx sum{};
    for (const cplx& a : n_mat.row(i)) {
      sq += std::norm(a);
      sum += a;
    }
    const bool norm_ok = sq <= norm_cap;
    const bool sum_ok = std::abs(sum) <= sum_cap;
    out.fail_norm += !norm_ok;
    out.fail_sum += !sum_ok;
    if (norm_ok && sum_ok) out.good_rows.push_back(i);
  }
  return out;
}

double compressible_distance(std::span<const cplx> x, std::size_t delta1) {
  require(delta1 <= x.size(), "compressible_distance: delta1 must be <= n");
  std::vector<double> mag(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mag[i] = std::norm(x[i]);
  std::sort(mag.begin(), mag.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + delta1 < mag.size(); ++i) acc += mag[i];
  return std::sqrt(acc);
}

bool is_compressible(std::span<const cplx> x, std::size_t delta1, double delta2) {
  return compressible_distance(x, delta1) <= delta2;
}

std::size_t pigeonhole_scale(std::span<const double> rho, double factor) {
  require(factor > 1, "pigeonhole_scale: factor must be > 1");
  require(rho.size() >= 2, "pigeonhole_scale: need at least two scales");
  for (std::size_t j = 0; j < rho.size(); ++j) {
    require(rho[j] > 0 && rho[j] <= 1, "pigeonhole_scale: values must lie in (0, 1]");
    require(j == 0 || rho[j] >= rho[j - 1], "pigeonhole_scale: sequence must be nondecreasing");
  }
  for (std::size_t j = 0; j + 1 < rho.size(); ++j)
    if (rho[j + 1] <= factor * rho[j]) return j;
  std::ostringstream msg;
  msg << "pigeonhole_scale: no j with rho[j+1] <= " << factor
      << " rho[j]; the guarantee factor^(len-1) >= rho_last / rho_first fails ("
      << std::pow(factor, static_cast<double>(rho.size() - 1)) << " < " << rho.back() / rho.front() << ")";
  throw PreconditionError(msg.str());
}

std::string to_string(RichPoor c) {
  switch (c) {
    case RichPoor::rich: return "rich";
    case RichPoor::poor: return "poor";
    case RichPoor::undecided: return "undecided";
  }
  return "?";
}

RichPoorReport rich_poor_classify(std::span<const cplx> v, double m_norm, double beta, double eta,
                                  const NoiseDistribution& dist, double epsilon, std::size_t trials,
                                  const RandomSource& src, const RichPoorOptions& opts) {
  const double len = norm2(v);
  if (std::abs(len - 1.0) > 1e-10)
    throw PreconditionError("rich_poor_classify: v must be a unit vector (norm " + std::to_string(len) + ")");
  require(beta > 0 && eta > 0 && m_norm >= 0, "rich_poor_classify: need beta, eta > 0 and |M| >= 0");
  const double n = static_cast<double>(v.size());
  RichPoorReport rep;
  rep.beta = beta;
  rep.eta = eta;
  rep.s_beta = m_norm + n / std::sqrt(beta);
  rep.radius = 2.0 * eta * rep.s_beta * std::sqrt(n);
  if (beta >= 1) {
    rep.boundary = true;
    rep.classification = RichPoor::poor;
    rep.lcf.value = 1.0;
    rep.lcf.radius = rep.radius;
    rep.lcf.bias_note = "not sampled: rho <= 1 <= beta";
    return rep;
  }
  const ConditionEvent event = ConditionEvent::g_epsilon(epsilon);
  rep.lcf = lcf_conditioned(dist, v, rep.radius, event, trials, src);
  if (rep.lcf.value + rep.lcf.ci95 <= beta)
    rep.classification = RichPoor::poor;
  else if (rep.lcf.value - rep.lcf.ci95 > beta)
    rep.classification = RichPoor::rich;
  if (rep.classification != RichPoor::rich || !opts.compute_scales) return rep;

  rep.f_beta = opts.f_beta.value_or(beta / (200.0 * opts.c_dioph));
  rep.j_max = opts.j_max.value_or(static_cast<std::size_t>(std::ceil(100.0 * std::log(1.0 / beta) / std::log(n))));
  const double ratio = 2.0 * rep.s_beta / rep.f_beta;
  // Radii grow geometrically; stop once they are huge (the estimate is 1 there).
  for (std::size_t j = 0; j <= rep.j_max; ++j) {
    const double r = rep.radius * std::pow(ratio, static_cast<double>(j));
    if (!std::isfinite(r)) break;
    rep.scale_radii.push_back(r);
  }
  const ComplexVec vec(v.begin(), v.end());
  const auto samples = sample_sums(dist, std::span<const ComplexVec>(&vec, 1), trials, src, event);
  for (const auto& e : lcf_from_samples(samples[0], rep.scale_radii)) rep.scale_rhos.push_back(e.value);
  // Sampled sums are one fixed set, so the estimates are nondecreasing in r.
  if (rep.scale_rhos.size() >= 2) {
    try {
      rep.scale_index = pigeonhole_scale(rep.scale_rhos, std::pow(n, 0.01));
    } catch (const PreconditionError&) {
      // Left unset: the sampled sequence violates the pigeonhole guarantee.
    }
  } else if (rep.scale_rhos.size() == 1) {
    rep.scale_index = 0;
  }
  if (rep.scale_index) {
    const double rho = rep.scale_rhos[*rep.scale_index];
    rep.level_index = static_cast<int>(std::floor(-std::log2(rho)));
  }
  return rep;
}

}  // namespace anticonc
