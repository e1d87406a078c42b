// Acceptance run: one PASS/FAIL line per criterion, each with its runtime
// budget. Exit status is nonzero iff some criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "anticonc/core/distribution.hpp"
#include "anticonc/harness/battery.hpp"
#include "anticonc/matrix/singular.hpp"
#include "anticonc/matrix/smoothed.hpp"
#include "oracles.hpp"

using namespace anticonc;

namespace {

struct Outcome {
  bool pass;
  std::string summary;
};

Outcome from(const CheckResult& c) {
  return {c.pass, c.name + ": " + std::to_string(c.instances) + " instances, " + std::to_string(c.failures) +
                      " failures, " + std::to_string(c.vacuous) + " vacuous; " + c.detail};
}

Outcome both(const CheckResult& a, const CheckResult& b) {
  const Outcome x = from(a), y = from(b);
  return {x.pass && y.pass, x.summary + " | " + y.summary};
}

Outcome svd_oracle() {
  const auto gauss = NoiseDistribution::standard_complex_gaussian();
  Xoshiro256pp rng(13);
  double worst = 0.0;
  std::size_t fails = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.below(8);
    ComplexMatrix a = perturbed_matrix(ComplexMatrix(n, n), gauss, RandomSource(13, 1), i);
    // A third of the cases are made ill-conditioned by scaling one column.
    if (i % 3 == 0)
      for (std::size_t r = 0; r < n; ++r) a(r, rng.below(n)) *= 1e-4;
    const std::vector<oracle::cplx> flat(a.data().begin(), a.data().end());
    const double want = oracle::jacobi_singular_values(flat, n).front();
    const double got = smallest_singular_value(a);
    const double rel = std::abs(got - want) / std::max(want, 1e-300);
    worst = std::max(worst, rel);
    if (rel > 1e-8) ++fails;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "200 matrices, n<=8, %zu beyond 1e-8, worst relative gap %.3g", fails, worst);
  return {fails == 0, buf};
}

Outcome threshold_calculator(bool suite_passed) {
  const double alpha = 0.1, m_norm = 100, c = 1;
  const std::size_t n = 100;
  const Threshold t = theorem13_threshold(alpha, m_norm, n, c);
  // Independent route: base-10 logarithms throughout.
  const double nd = static_cast<double>(n);
  const double exponent10 = -300.0 * std::log10(1.0 / alpha) / std::log10(nd);
  const double base10 = std::log10(c * (m_norm + std::sqrt(nd)) / alpha * nd * nd);
  const double want = exponent10 * base10;
  const double rel = std::abs(t.log10_value - want) / std::abs(want);
  char buf[400];
  std::snprintf(buf, sizeof buf,
                "log10 eta* = %.1f (independent %.6f, rel gap %.2g); the quoted ~-906 drops a factor 10 in the base "
                "(1.1e6 vs 1.1e7); eta* underflows double (%g), so the quantitative regime is out of desk reach and "
                "criteria 1-13 stand in (%s)",
                t.log10_value, want, rel, t.value, suite_passed ? "all passed" : "some failed");
  return {rel <= 1e-9 && suite_passed, buf};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double budget_s;
    std::function<Outcome()> run;
  };
  bool all_prior = true;
  const std::vector<Criterion> criteria{
      {1, 60, [] { return from(battery::erdos_exhaustive(10, 0.4)); }},
      {2, 600,
       [] {
         return from(battery::tail_bound("edelman_tail", "zero", {20, 50}, {1e-3, 1e-2}, 1.0, 10000, 2));
       }},
      {3, 300, [] { return from(battery::tail_bound("smoothed_tail", "rank1:20", {20}, {1e-2}, 2.35, 10000, 3)); }},
      {4, 120, [] { return from(battery::majorization_exhaustive(6, {0.0, 0.5, 1.0})); }},
      {5, 60, [] { return from(battery::doubling_random(200, 5)); }},
      {6, 300,
       [] {
         return from(battery::counting_lemma_grid({3, 5}, {1, 2}, {Rational(1), Rational(2)},
                                                  {Rational(1, 4), Rational(1, 2)}));
       }},
      {7, 60, [] { return from(battery::lemma16_exhaustive({Rational(0), Rational(1, 2)})); }},
      {8, 60, [] { return from(battery::cauchy_davenport_random(500, {3, 5, 7}, 8)); }},
      {9, 120, [] { return from(battery::sumset_iteration_random(100, {5, 7}, 3, 9)); }},
      {10, 600, [] { return from(battery::diophantine_constructed(20, 20000, 10)); }},
      {11, 300,
       [] { return both(battery::conditioning_random(1000, 11), battery::perm_tail_random(100, 5000, 11)); }},
      {12, 120, [] { return from(battery::good_rows_random(1000, 100, 0.025, 12)); }},
      {13, 60, svd_oracle},
      {14, 60, [&all_prior] { return threshold_calculator(all_prior); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs < c.budget_s;
    if (!pass) {
      ++failed;
      if (c.id < 14) all_prior = false;
    }
    std::printf("criterion %d: %s [%.2fs / %.0fs] %s\n", c.id, pass ? "PASS" : "FAIL", secs, c.budget_s,
                o.summary.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
