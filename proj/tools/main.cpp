#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "anticonc/core/errors.hpp"
#include "anticonc/harness/run.hpp"

using namespace anticonc;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCapability = 3;

struct Globals {
  std::string out;
  std::string csv;
  std::string seed;
  std::string threads;
};

// Registers `--<key>` for every schema key of `kind` except the ones fixed
// by the subcommand itself.
void add_key_options(CLI::App* sub, ExperimentKind kind, std::map<std::string, std::string>& values,
                     const std::vector<std::string>& skip = {}) {
  for (const auto& key : config_keys(kind)) {
    if (key == "out" || key == "csv" || key == "seed" || key == "threads") continue;
    if (std::find(skip.begin(), skip.end(), key) != skip.end()) continue;
    sub->add_option("--" + key, values[key], "config key '" + key + "'");
  }
}

int finish(RunReport rep) {
  write_artifacts(rep);
  const bool to_stdout = rep.config.get_string("out").empty();
  if (to_stdout) std::cout << rep.to_json().dump(2) << '\n';
  for (const auto& c : rep.checks)
    if (!c.pass) std::cerr << "FAIL " << c.name << " (" << c.failures << "/" << c.instances << ") " << c.detail << '\n';
  for (const auto& a : rep.artifacts) std::cerr << "wrote " << a << '\n';
  return exit_code(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anti-concentration experiment harness"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out, "write the JSON report (or the CSV table for a .csv path)");
  app.add_option("--csv", g.csv, "also write the CSV data table here");
  app.add_option("--seed", g.seed, "master seed (all randomness derives from it)");
  app.add_option("--threads", g.threads, "worker threads, 0 = all cores (never changes results)");

  std::optional<ExperimentKind> kind;
  std::map<std::string, std::string> values;
  std::string config_path;

  struct Entry {
    ExperimentKind kind;
    const char* name;
    const char* help;
  };
  const Entry entries[] = {
      {ExperimentKind::lcf, "lcf", "Levy concentration function (exact or Monte Carlo)"},
      {ExperimentKind::fourier, "fourier", "xi-norm, P_xi, majorization, doubling, Esseen majorant"},
      {ExperimentKind::diophantine, "diophantine", "annulus search, refined bound, soundness check"},
      {ExperimentKind::tail, "tail", "smallest singular value tail curve (CSV)"},
      {ExperimentKind::classify, "classify", "rich/poor classification with scale pigeonholing"},
      {ExperimentKind::threshold, "threshold", "log-space singular value threshold calculator"},
  };
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    add_key_options(sub, e.kind, values);
    sub->callback([&kind, k = e.kind] { kind = k; });
  }

  auto* count = app.add_subcommand("count", "finite-field counting (rk, verify-lemma, lemma16, b-set)");
  count->require_subcommand(1);
  count->fallthrough();
  for (const char* op : {"rk", "verify-lemma", "lemma16", "b-set"}) {
    auto* sub = count->add_subcommand(op);
    add_key_options(sub, ExperimentKind::count, values, {"op"});
    sub->callback([&kind, &values, op] {
      kind = ExperimentKind::count;
      values["op"] = op;
    });
  }

  auto* verify = app.add_subcommand("verify", "run an inequality-verification suite");
  verify->add_option("suite", values["suite"], "concentration | fourier | counting | matrix | all");
  verify->callback([&kind] { kind = ExperimentKind::verify; });

  auto* run = app.add_subcommand("run", "run an experiment config file");
  run->add_option("config", config_path, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      cfg = ExperimentConfig::load(config_path);
    } else {
      std::map<std::string, std::string> pairs;
      for (const auto& [k, v] : values)
        if (!v.empty()) pairs[k] = v;
      cfg = ExperimentConfig::from_pairs(*kind, pairs);
    }
    if (!g.out.empty()) cfg.set("out", g.out);
    if (!g.csv.empty()) cfg.set("csv", g.csv);
    if (!g.seed.empty()) cfg.set("seed", g.seed);
    if (!g.threads.empty()) cfg.set("threads", g.threads);
    return finish(run_experiment(cfg));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PreconditionError& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << '\n';
    return kExitCapability;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCapability;
  }
}
