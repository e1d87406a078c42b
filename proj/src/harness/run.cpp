#include "anticonc/harness/run.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

#include "anticonc/core/errors.hpp"
#include "anticonc/core/parallel.hpp"
#include "anticonc/counting/counting.hpp"
#include "anticonc/fourier/diophantine.hpp"
#include "anticonc/fourier/fourier.hpp"
#include "anticonc/harness/battery.hpp"
#include "anticonc/matrix/smoothed.hpp"

namespace anticonc {
namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError(p.string(), "cannot read input file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Hash of everything that determines the numbers: the canonical config
// without the output/threading keys, followed by every input file.
std::string input_hash(const ExperimentConfig& cfg) {
  std::string data = "experiment = " + to_string(cfg.kind()) + "\n";
  for (const auto& [k, v] : cfg.values())
    if (k != "threads" && k != "out" && k != "csv") data += k + " = " + v + "\n";
  for (const auto& f : cfg.input_files()) data += "\nfile " + f.string() + "\n" + read_file(f);
  return git_blob_sha1(data);
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json levy_json(const LevyEstimate& e) {
  Json j;
  j["radius"] = e.radius;
  j["value"] = e.value;
  j["method"] = to_string(e.method);
  if (e.exact_value) j["exact"] = to_string(*e.exact_value);
  if (e.method == Method::monte_carlo) {
    j["trials"] = e.trials;
    j["ci95"] = e.ci95;
    j["bias_note"] = e.bias_note;
  }
  j["center"] = complex_json(e.center);
  return j;
}

CheckResult single(std::string name, bool pass, bool vacuous = false, std::string detail = "") {
  CheckResult c;
  c.name = std::move(name);
  c.pass = pass;
  c.failures = pass ? 0 : 1;
  c.vacuous = vacuous ? 1 : 0;
  c.detail = std::move(detail);
  return c;
}

FpVector fp_vector(const ExperimentConfig& cfg, std::uint32_t p) {
  GaussianIntVector g;
  for (const cplx z : cfg.coefficient_vector()) {
    const GaussInt q = nearest_gaussian_int(z);
    if (q.value() != z) throw ConfigError("count.vector", "entries must be Gaussian integers, got " + format_complex(z));
    g.push_back(q);
  }
  return phi_p(g, p);
}

std::uint32_t prime_of(const ExperimentConfig& cfg) {
  const auto p = cfg.get_uint("p");
  if (p > 1'000'003 || !is_prime(p) || p == 2) throw ConfigError("count.p", "p must be an odd prime");
  return static_cast<std::uint32_t>(p);
}

void run_lcf(const ExperimentConfig& cfg, RunReport& rep) {
  const auto dist = cfg.get_dist("dist");
  const auto v = cfg.coefficient_vector();
  const auto radii = cfg.get_doubles("radius");
  const auto event = ConditionEvent::parse(cfg.get_string("condition"));
  const bool exact = cfg.get_string("method") == "exact";
  std::vector<LevyEstimate> est;
  if (exact) {
    for (double r : radii)
      est.push_back(event.kind() == ConditionEvent::Kind::always ? lcf_exact(dist, v, r)
                                                                 : lcf_conditioned_exact(dist, v, r, event));
  } else {
    est = lcf_monte_carlo_radii(dist, v, radii, cfg.get_uint("trials"), RandomSource(cfg.seed()), event);
  }
  rep.results["dist"] = dist.name();
  rep.results["n"] = v.size();
  rep.results["condition"] = event.label();
  Json values = Json::array();
  CsvTable csv{{"radius", "value", "ci95", "trials", "method"}, {}};
  bool in_range = true;
  for (const auto& e : est) {
    values.push_back(levy_json(e));
    csv.rows.push_back({format_number(e.radius), format_number(e.value), format_number(e.ci95),
                        std::to_string(e.trials), to_string(e.method)});
    in_range = in_range && e.value >= 0.0 && e.value <= 1.0;
  }
  rep.results["values"] = values;
  if (est.size() == 1) rep.results["value"] = est.front().value;
  rep.csv = csv;
  rep.checks.push_back(single("probability_range", in_range));
}

void run_fourier(const ExperimentConfig& cfg, RunReport& rep) {
  const auto dist = cfg.get_dist("dist");
  const auto v = cfg.coefficient_vector();
  const std::string op = cfg.get_string("op");
  rep.results["op"] = op;
  rep.results["dist"] = dist.name();
  if (op == "xi-norm") {
    CsvTable csv{{"index", "w", "xi_norm_sq"}, {}};
    Json arr = Json::array();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double x = xi_norm_sq(v[i], dist);
      arr.push_back(x);
      csv.rows.push_back({std::to_string(i), format_complex(v[i]), format_number(x)});
    }
    rep.results["xi_norm_sq"] = arr;
    rep.csv = csv;
  } else if (op == "p-xi") {
    if (cfg.get_string("method") == "exact") {
      rep.results["value"] = p_xi_exact(v, dist);
    } else {
      const auto mc = p_xi_monte_carlo(v, dist, cfg.get_uint("trials"), RandomSource(cfg.seed()));
      rep.results["value"] = mc.value;
      rep.results["ci95"] = mc.ci95;
      rep.results["trials"] = mc.trials;
    }
  } else if (op == "majorization") {
    const auto m = fourier_majorization_check(v, dist, cfg.get_double("radius"));
    rep.results["rho"] = m.rho;
    rep.results["p_xi"] = m.p_xi;
    rep.results["majorant"] = m.majorant;
    rep.checks.push_back(single("fourier_majorization", m.pass, m.majorant >= 1.0));
  } else if (op == "doubling") {
    if (cfg.get_string("w").empty()) throw ConfigError("fourier.w", "doubling needs a second vector w");
    const auto d = doubling_check(v, cfg.get_vector("w"), dist);
    rep.results["p_v"] = d.pv;
    rep.results["p_w"] = d.pw;
    rep.results["p_vw"] = d.pvw;
    rep.checks.push_back(single("doubling", d.pass));
  } else {
    const auto q = esseen_integral_majorant(v, dist, cfg.get_double("quad-tol"), cfg.get_uint("max-cells"));
    rep.results["value"] = q.value;
    rep.results["error_estimate"] = q.error_estimate;
    rep.results["cells"] = q.cells;
  }
}

Json annulus_json(const AnnulusResult& s) {
  Json j;
  j["status"] = to_string(s.status);
  j["grid_min"] = s.grid_min;
  j["certified_lower_bound"] = s.certified_lower_bound;
  j["step"] = s.step;
  j["grid_points"] = s.grid_points;
  j["used_real_reduction"] = s.used_real_reduction;
  Json w;
  w["eta"] = complex_json(s.best.eta);
  w["distance"] = s.best.distance;
  Json pt = Json::array();
  for (const auto& g : s.best.lattice_point) pt.push_back(Json::array({g.re, g.im}));
  w["lattice_point"] = pt;
  j["best"] = w;
  return j;
}

Json bound_json(const DiophantineBound& b) {
  Json j;
  j["value"] = b.value;
  j["term_alpha"] = b.term_alpha;
  j["term_f"] = b.term_f;
  j["term_g"] = b.term_g;
  j["vacuous"] = b.vacuous;
  return j;
}

void run_diophantine(const ExperimentConfig& cfg, RunReport& rep) {
  const auto v = cfg.coefficient_vector();
  const double f = cfg.get_double("f"), g = cfg.get_double("g"), alpha = cfg.get_double("alpha");
  const std::string mode = cfg.get_string("mode");
  rep.results["mode"] = mode;
  if (mode == "search") {
    AnnulusOptions opts;
    opts.real_eta_only = cfg.get_bool("real-eta");
    const auto s = annulus_search(v, f, g, alpha, opts);
    rep.results["search"] = annulus_json(s);
    rep.checks.push_back(single("search_decided", s.status != AnnulusStatus::undecided, false,
                                "undecided after refinement"));
  } else if (mode == "bound") {
    const double c = cfg.get_string("cxi").empty() ? goodness_constant(cfg.get_dist("dist")).c : cfg.get_double("cxi");
    rep.results["c_xi"] = c;
    rep.results["bound"] = bound_json(refined_diophantine_bound(f, g, alpha, cfg.get_double("r"), c));
  } else {
    const auto s = diophantine_soundness_check(v, cfg.get_dist("dist"), f, g, alpha, cfg.get_double("r"),
                                               cfg.get_uint("trials"), RandomSource(cfg.seed()));
    rep.results["search"] = annulus_json(s.search);
    rep.results["c_xi"] = s.c_xi;
    rep.results["alpha_certified"] = s.alpha_certified;
    rep.results["bound"] = bound_json(s.bound);
    rep.results["lcf"] = levy_json(s.lcf);
    rep.checks.push_back(single("diophantine_soundness", s.pass || s.bound.vacuous, s.bound.vacuous));
  }
}

void run_count(const ExperimentConfig& cfg, RunReport& rep) {
  const std::uint32_t p = prime_of(cfg);
  const std::string op = cfg.get_string("op");
  const auto k = static_cast<unsigned>(cfg.get_uint("k"));
  const Rational alpha = cfg.get_rational("alpha");
  rep.results["op"] = op;
  rep.results["p"] = p;
  rep.results["k"] = k;
  rep.results["alpha"] = to_string(alpha);
  if (op == "verify-lemma") {
    const auto r = counting_lemma_verify(static_cast<unsigned>(cfg.get_uint("n")), p, k,
                                         static_cast<unsigned>(cfg.get_uint("s")), cfg.get_rational("t"), alpha);
    rep.results["n"] = r.n;
    rep.results["s"] = r.s;
    rep.results["t"] = to_string(r.t);
    rep.results["card"] = r.card.str();
    rep.results["space"] = r.space.str();
    rep.results["bound"] = to_string(r.bound);
    rep.results["vacuous"] = r.vacuous;
    rep.checks.push_back(single("counting_lemma", r.pass, r.vacuous));
    return;
  }
  const FpVector v = fp_vector(cfg, p);
  rep.results["vector"] = v.to_string();
  if (op == "rk") {
    rep.results["value"] = rk_alpha(v, k, alpha).str();
  } else if (op == "lemma16") {
    const auto r = lemma16_check(v, k, alpha);
    rep.results["lhs"] = r.lhs.str();
    rep.results["r_alpha"] = r.r_alpha.str();
    rep.results["combinatorial"] = r.combinatorial.str();
    rep.results["rhs"] = r.rhs.str();
    rep.checks.push_back(single("lemma16", r.pass));
  } else {
    const auto s = static_cast<unsigned>(cfg.get_uint("s"));
    rep.results["s"] = s;
    rep.results["t"] = to_string(cfg.get_rational("t"));
    rep.results["member"] = b_set_membership(v, k, s, cfg.get_rational("t"), alpha);
  }
}

void run_tail(const ExperimentConfig& cfg, RunReport& rep) {
  const std::size_t n = cfg.get_uint("n");
  const auto dist = cfg.get_dist("dist");
  const std::string mspec = cfg.get_string("matrix");
  ComplexMatrix m;
  try {
    m = build_matrix(mspec, n);
  } catch (const PreconditionError& e) {
    throw ConfigError("tail.matrix", e.what());
  }
  const auto curve = tail_curve(m, dist, cfg.get_doubles("etas"), cfg.get_uint("trials"), RandomSource(cfg.seed()), mspec);
  const std::string check = cfg.get_string("check");
  CsvTable csv{{"eta", "hits", "trials", "empirical", "edelman_bound", "sst_bound"}, {}};
  Json rows = Json::array();
  std::size_t failures = 0;
  for (std::size_t k = 0; k < curve.etas.size(); ++k) {
    const BoundParams bp{n, curve.etas[k]};
    const double ed = reference_bound(BoundKind::edelman, bp), sst = reference_bound(BoundKind::sst, bp);
    const double emp = curve.empirical(k), ci = binomial_ci95(emp, curve.trials);
    csv.rows.push_back({format_number(curve.etas[k]), std::to_string(curve.hits[k]), std::to_string(curve.trials),
                        format_number(emp), format_number(ed), format_number(sst)});
    Json r;
    r["eta"] = curve.etas[k];
    r["hits"] = curve.hits[k];
    r["empirical"] = emp;
    r["ci95"] = ci;
    r["edelman_bound"] = ed;
    r["sst_bound"] = sst;
    rows.push_back(r);
    if (check != "none" && emp > (check == "edelman" ? ed : sst) + 3 * ci) ++failures;
  }
  rep.results["n"] = n;
  rep.results["dist"] = curve.dist_id;
  rep.results["matrix"] = curve.matrix_id;
  rep.results["trials"] = curve.trials;
  rep.results["curve"] = rows;
  rep.csv = csv;
  if (check != "none") {
    CheckResult c = single(check + "_tail", failures == 0);
    c.instances = curve.etas.size();
    c.failures = failures;
    rep.checks.push_back(c);
  }
}

void run_classify(const ExperimentConfig& cfg, RunReport& rep) {
  auto v = cfg.coefficient_vector();
  if (cfg.get_bool("normalize")) {
    const double nv = norm2(v);
    if (nv == 0.0) throw ConfigError("classify.vector", "cannot normalize the zero vector");
    for (auto& x : v) x /= nv;
  }
  RichPoorOptions opts;
  opts.c_dioph = cfg.get_double("c-dioph");
  if (!cfg.get_string("f-beta").empty()) opts.f_beta = cfg.get_double("f-beta");
  if (!cfg.get_string("j-max").empty()) opts.j_max = cfg.get_uint("j-max");
  const auto r = rich_poor_classify(v, cfg.get_double("m-norm"), cfg.get_double("beta"), cfg.get_double("eta"),
                                    cfg.get_dist("dist"), cfg.get_double("epsilon"), cfg.get_uint("trials"),
                                    RandomSource(cfg.seed()), opts);
  rep.results["classification"] = to_string(r.classification);
  rep.results["boundary"] = r.boundary;
  rep.results["beta"] = r.beta;
  rep.results["eta"] = r.eta;
  rep.results["s_beta"] = r.s_beta;
  rep.results["radius"] = r.radius;
  if (!r.boundary) rep.results["lcf"] = levy_json(r.lcf);
  rep.results["f_beta"] = r.f_beta;
  rep.results["j_max"] = r.j_max;
  rep.results["scale_radii"] = r.scale_radii;
  rep.results["scale_rhos"] = r.scale_rhos;
  if (r.scale_index) rep.results["scale_index"] = *r.scale_index;
  if (r.level_index) rep.results["level_index"] = *r.level_index;
  if (!r.scale_radii.empty()) {
    CsvTable csv{{"j", "radius", "rho"}, {}};
    for (std::size_t j = 0; j < r.scale_radii.size(); ++j)
      csv.rows.push_back({std::to_string(j), format_number(r.scale_radii[j]), format_number(r.scale_rhos[j])});
    rep.csv = csv;
  }
}

void run_threshold(const ExperimentConfig& cfg, RunReport& rep) {
  const auto t = theorem13_threshold(cfg.get_double("alpha"), cfg.get_double("m-norm"), cfg.get_uint("n"),
                                     cfg.get_double("c"));
  rep.results["log_eta"] = t.log_value;
  rep.results["log10_eta"] = t.log10_value;
  rep.results["eta"] = t.value;
  rep.results["underflow"] = t.value == 0.0;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  set_thread_count(static_cast<unsigned>(config.get_uint("threads")));
  RunReport rep;
  if (config.kind() == ExperimentKind::verify) {
    rep = verify_suite(config.get_string("suite"), config.seed());
    rep.config = config;
  } else {
    rep.config = config;
    switch (config.kind()) {
      case ExperimentKind::lcf: run_lcf(config, rep); break;
      case ExperimentKind::fourier: run_fourier(config, rep); break;
      case ExperimentKind::diophantine: run_diophantine(config, rep); break;
      case ExperimentKind::count: run_count(config, rep); break;
      case ExperimentKind::tail: run_tail(config, rep); break;
      case ExperimentKind::classify: run_classify(config, rep); break;
      case ExperimentKind::threshold: run_threshold(config, rep); break;
      case ExperimentKind::verify: break;
    }
  }
  rep.input_hash = input_hash(config);
  rep.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

void write_artifacts(RunReport& report) {
  const std::string out = report.config.get_string("out");
  std::string csv_path = report.config.get_string("csv");
  std::string json_path;
  if (out.size() >= 4 && out.compare(out.size() - 4, 4, ".csv") == 0) {
    if (csv_path.empty()) csv_path = out;
  } else {
    json_path = out;
  }
  auto write = [&](const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("out", "cannot write '" + path + "'");
    f << text;
    report.artifacts.push_back(path);
  };
  if (!csv_path.empty()) {
    if (!report.csv) throw ConfigError("csv", "experiment '" + to_string(report.config.kind()) + "' produces no CSV table");
    write(csv_path, report.csv->to_string());
  }
  if (!json_path.empty()) {
    report.artifacts.push_back(json_path);
    const std::string text = report.to_json().dump(2) + "\n";
    report.artifacts.pop_back();
    write(json_path, text);
  }
}

RunReport verify_suite(const std::string& suite, std::uint64_t seed) {
  using Battery = std::vector<std::function<CheckResult()>>;
  const std::map<std::string, Battery> suites{
      {"concentration",
       {[] { return battery::erdos_exhaustive(6); },
        [=] { return battery::conditioning_random(200, seed); },
        [=] { return battery::perm_tail_random(20, 2000, seed + 1); },
        [=] { return battery::shift_subgaussian_random(10, 5000, seed + 2); }}},
      {"fourier",
       {[] { return battery::majorization_exhaustive(4, {0.0, 0.5, 1.0}); },
        [=] { return battery::doubling_random(100, seed); },
        [=] { return battery::diophantine_constructed(2, 5000, seed + 1); }}},
      {"counting",
       {[] { return battery::lemma16_exhaustive({Rational(0), Rational(1, 2)}); },
        [] {
          return battery::counting_lemma_grid({3}, {1, 2}, {Rational(1), Rational(2)}, {Rational(1, 4), Rational(1, 2)});
        },
        [=] { return battery::cauchy_davenport_random(200, {3, 5, 7}, seed); },
        [=] { return battery::sumset_iteration_random(50, {5, 7}, 3, seed + 1); }}},
      {"matrix",
       {[=] { return battery::tail_bound("edelman_tail", "zero", {10}, {0.01, 0.1}, 1.0, 2000, seed); },
        [=] { return battery::tail_bound("smoothed_tail", "rank1:10", {10}, {0.01, 0.1}, 2.35, 2000, seed + 1); },
        [=] { return battery::good_rows_random(100, 50, 0.025, seed + 2); },
        [=] { return battery::operator_norm_tail(10, 4.0, 2000, seed + 3); },
        [=] { return battery::svd_consistency(50, 8, seed + 4); }}},
  };
  std::vector<std::string> names;
  if (suite == "all") {
    names = {"concentration", "fourier", "counting", "matrix"};
  } else if (suites.count(suite)) {
    names = {suite};
  } else {
    throw ConfigError("verify.suite", "unknown suite '" + suite + "' (concentration, fourier, counting, matrix, all)");
  }
  RunReport rep;
  rep.config = ExperimentConfig::from_pairs(ExperimentKind::verify, {{"suite", suite}, {"seed", std::to_string(seed)}});
  CsvTable csv{{"suite", "check", "instances", "failures", "vacuous", "pass"}, {}};
  Json table = Json::array();
  for (const auto& name : names)
    for (const auto& run : suites.at(name)) {
      CheckResult c = run();
      csv.rows.push_back({name, c.name, std::to_string(c.instances), std::to_string(c.failures),
                          std::to_string(c.vacuous), c.pass ? "true" : "false"});
      Json row;
      row["suite"] = name;
      row["check"] = c.name;
      row["instances"] = c.instances;
      row["failures"] = c.failures;
      row["pass"] = c.pass;
      table.push_back(row);
      c.name = name + "." + c.name;
      rep.checks.push_back(std::move(c));
    }
  rep.results["suite"] = suite;
  rep.results["summary"] = table;
  rep.csv = csv;
  rep.input_hash = input_hash(rep.config);
  return rep;
}

int exit_code(const RunReport& report) { return report.pass() ? 0 : 1; }

}  // namespace anticonc
