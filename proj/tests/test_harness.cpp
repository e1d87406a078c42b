#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "anticonc/core/errors.hpp"
#include "anticonc/harness/battery.hpp"
#include "anticonc/harness/run.hpp"

using namespace anticonc;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "anticonc_harness_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

const char* kLcfConfig =
    "# all-ones Rademacher\n"
    "experiment = lcf\n"
    "dist = rademacher\n"
    "vector = 1,1,1,1\n"
    "radius = 0.5\n";

}  // namespace

TEST(Config, ParsesAndFillsDefaults) {
  const auto c = ExperimentConfig::parse(kLcfConfig);
  EXPECT_EQ(c.kind(), ExperimentKind::lcf);
  EXPECT_EQ(c.get_string("method"), "exact");
  EXPECT_EQ(c.seed(), 0u);
  EXPECT_EQ(c.get_doubles("radius"), std::vector<double>{0.5});
  EXPECT_EQ(c.coefficient_vector().size(), 4u);
}

TEST(Config, CanonicalRoundTrips) {
  for (const char* text : {kLcfConfig, "experiment = tail\nn = 5\netas = 0.1, 0.01\nmatrix = rank1:5\n",
                           "experiment = count\nop = verify-lemma\np = 3\nalpha = 1/2\n",
                           "experiment = verify\nsuite = counting\nseed = 9\n"}) {
    const auto c = ExperimentConfig::parse(text);
    EXPECT_EQ(ExperimentConfig::parse(c.canonical()), c) << text;
    EXPECT_EQ(ExperimentConfig::parse(c.canonical()).canonical(), c.canonical());
  }
}

TEST(Config, ErrorsNameTheKey) {
  auto key_of = [](const std::string& text) {
    try {
      (void)ExperimentConfig::parse(text, "cfg");
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<no error>");
  };
  EXPECT_EQ(key_of("experiment = lcf\nvector = 1\nradiuss = 0.5\n"), "lcf.radiuss");
  EXPECT_EQ(key_of("experiment = lcf\nvector = 1\n"), "lcf.radius");
  EXPECT_EQ(key_of("experiment = lcf\nvector = 1\nradius = abc\n"), "lcf.radius");
  EXPECT_EQ(key_of("experiment = lcf\nvector = 1\nradius = 1\nmethod = guess\n"), "lcf.method");
  EXPECT_EQ(key_of("experiment = lcf\nradius = 1\n"), "lcf.vector");
  EXPECT_EQ(key_of("experiment = lcf\nvector = 1\nradius = 1\nseed = -4\n"), "lcf.seed");
  EXPECT_EQ(key_of("experiment = lcf\nvector = 1\nradius = 1\ndist = cauchy\n"), "lcf.dist");
  EXPECT_EQ(key_of("experiment = teleport\n"), "experiment");
  EXPECT_EQ(key_of("vector = 1\n"), "cfg: experiment");
  EXPECT_EQ(key_of("experiment = lcf\nno equals sign\n"), "cfg:2");
  EXPECT_EQ(key_of("experiment = lcf\nradius = 1\nradius = 2\n"), "cfg:3: radius");
}

TEST(Config, MatrixDescriptions) {
  EXPECT_EQ(build_matrix("zero", 3).frobenius_norm(), 0.0);
  EXPECT_DOUBLE_EQ(build_matrix("identity:2", 4).frobenius_norm(), 4.0);
  EXPECT_DOUBLE_EQ(build_matrix("rank1:20", 20)(3, 7).real(), 1.0);
  EXPECT_THROW(build_matrix("hilbert", 3), PreconditionError);
  const auto path = scratch("m.txt");
  std::ofstream(path) << "1,2i\n0,3\n";
  const auto m = build_matrix("file:" + path.string(), 2);
  EXPECT_EQ(m(0, 1), cplx(0, 2));
  EXPECT_THROW(build_matrix("file:" + path.string(), 3), PreconditionError);
}

TEST(Run, LcfExactReportsValue) {
  const auto rep = run_experiment(ExperimentConfig::parse(kLcfConfig));
  EXPECT_DOUBLE_EQ(rep.results["value"].get<double>(), 0.375);
  EXPECT_EQ(rep.results["values"][0]["exact"], "3/8");
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(exit_code(rep), 0);
  EXPECT_EQ(rep.input_hash.size(), 40u);
  const auto j = nlohmann::json::parse(rep.to_json().dump());
  EXPECT_EQ(j["config"]["vector"], "1,1,1,1");
}

TEST(Run, HashIgnoresThreadsAndOutputs) {
  auto a = ExperimentConfig::parse(kLcfConfig);
  auto b = a;
  b.set("threads", "3");
  b.set("out", scratch("x.json").string());
  EXPECT_EQ(run_experiment(a).input_hash, run_experiment(b).input_hash);
  b.set("seed", "1");
  EXPECT_NE(run_experiment(a).input_hash, run_experiment(b).input_hash);
}

TEST(Run, GitBlobHash) {
  EXPECT_EQ(git_blob_sha1(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(git_blob_sha1("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST(Run, SameConfigByteIdenticalCsv) {
  const std::string text =
      "experiment = tail\nn = 6\ndist = gaussian\netas = 0.05,0.2\ntrials = 300\nseed = 17\n";
  const auto p1 = scratch("tail1.csv"), p2 = scratch("tail2.csv");
  auto c1 = ExperimentConfig::parse(text + "out = " + p1.string() + "\nthreads = 1\n");
  auto c2 = ExperimentConfig::parse(text + "out = " + p2.string() + "\nthreads = 0\n");
  auto r1 = run_experiment(c1), r2 = run_experiment(c2);
  write_artifacts(r1);
  write_artifacts(r2);
  const auto a = slurp(p1), b = slurp(p2);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), "eta,hits,trials,empirical,edelman_bound,sst_bound");
  EXPECT_EQ(r1.artifacts, std::vector<std::string>{p1.string()});
}

TEST(Run, JsonArtifactListsItself) {
  const auto p = scratch("lcf.json");
  auto rep = run_experiment(ExperimentConfig::parse(std::string(kLcfConfig) + "out = " + p.string() + "\n"));
  write_artifacts(rep);
  const auto j = nlohmann::json::parse(slurp(p));
  EXPECT_EQ(j["artifacts"][0], p.string());
  EXPECT_EQ(j["results"]["value"], 0.375);
}

TEST(Run, CsvRequestWithoutTableIsConfigError) {
  auto rep = run_experiment(
      ExperimentConfig::parse("experiment = threshold\nalpha = 0.1\nm-norm = 100\nn = 100\ncsv = " +
                              scratch("t.csv").string() + "\n"));
  EXPECT_THROW(write_artifacts(rep), ConfigError);
}

TEST(Run, DispatchesEveryKind) {
  const auto fourier = run_experiment(
      ExperimentConfig::parse("experiment = fourier\nop = majorization\nvector = 1,2\nradius = 0.5\n"));
  EXPECT_TRUE(fourier.pass());
  const auto count =
      run_experiment(ExperimentConfig::parse("experiment = count\nop = rk\np = 5\nvector = 1,1\nk = 1\n"));
  EXPECT_EQ(count.results["value"], "8");
  const auto lemma =
      run_experiment(ExperimentConfig::parse("experiment = count\nop = verify-lemma\np = 3\nalpha = 1/2\n"));
  EXPECT_EQ(lemma.results["bound"], "54");
  EXPECT_TRUE(lemma.pass());
  const auto dio = run_experiment(
      ExperimentConfig::parse("experiment = diophantine\nvector = 1,1\nf = 0.5\ng = 2\nalpha = 0.1\n"));
  EXPECT_EQ(dio.results["search"]["status"], "witness");
  const auto thr =
      run_experiment(ExperimentConfig::parse("experiment = threshold\nalpha = 0.1\nm-norm = 100\nn = 100\n"));
  EXPECT_NEAR(thr.results["log10_eta"].get<double>(), -150 * std::log10(1.1e7), 1e-9);
  const auto cls = run_experiment(ExperimentConfig::parse(
      "experiment = classify\nvector = 1,1,1,1\nnormalize = true\nbeta = 2\neta = 0.1\n"));
  EXPECT_EQ(cls.results["classification"], "poor");
  EXPECT_THROW(run_experiment(ExperimentConfig::parse("experiment = fourier\nop = p-xi\ndist = gaussian\nvector = 1\n")),
               CapabilityError);
  EXPECT_THROW(run_experiment(ExperimentConfig::parse("experiment = count\nop = rk\np = 5\nvector = 1.5\n")),
               ConfigError);
}

TEST(Verify, CountingSuitePasses) {
  const auto rep = verify_suite("counting");
  ASSERT_EQ(rep.checks.size(), 4u);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.name << ' ' << c.detail;
  EXPECT_EQ(rep.checks[0].instances, 162u);
  EXPECT_EQ(exit_code(rep), 0);
  ASSERT_TRUE(rep.csv.has_value());
  EXPECT_EQ(rep.csv->header.front(), "suite");
}

TEST(Verify, UnknownSuiteIsError) {
  EXPECT_THROW(verify_suite("astrology"), ConfigError);
  EXPECT_THROW(ExperimentConfig::parse("experiment = verify\nsuite = astrology\n"), ConfigError);
}

TEST(Verify, FailuresAreEnumeratedAndSetExitCode) {
  RunReport rep;
  rep.checks.push_back({"a", true, 3, 0, 0, ""});
  rep.checks.push_back({"b", false, 3, 1, 0, "FAIL x"});
  EXPECT_EQ(exit_code(rep), 1);
  EXPECT_EQ(rep.to_json()["failed_checks"], nlohmann::json::array({"b"}));
}

TEST(Battery, SmallSweepsPass) {
  EXPECT_TRUE(battery::erdos_exhaustive(4).pass);
  EXPECT_EQ(battery::erdos_exhaustive(3).instances, 3u + 9u + 27u);
  EXPECT_TRUE(battery::conditioning_random(50, 1).pass);
  EXPECT_TRUE(battery::doubling_random(30, 2).pass);
  EXPECT_TRUE(battery::majorization_exhaustive(3, {0.0, 1.0}).pass);
  EXPECT_TRUE(battery::svd_consistency(20, 6, 3).pass);
}
