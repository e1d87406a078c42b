#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "anticonc/concentration/checks.hpp"
#include "anticonc/concentration/levy.hpp"
#include "anticonc/core/errors.hpp"
#include "anticonc/core/parallel.hpp"
#include "oracles.hpp"

using namespace anticonc;

namespace {

const NoiseDistribution kRad = NoiseDistribution::rademacher();

ComplexVec real_vec(std::initializer_list<double> xs) { return ComplexVec(xs.begin(), xs.end()); }

}  // namespace

TEST(LcfExact, Examples) {
  const auto e = lcf_exact(kRad, real_vec({1, 1, 1, 1}), 0.5);
  EXPECT_EQ(*e.exact_value, Rational(3, 8));
  EXPECT_EQ(e.ci95, 0.0);
  EXPECT_EQ(e.trials, 0u);
  EXPECT_EQ(lcf_exact(kRad, real_vec({0, 0, 0}), 0.0).value, 1.0);
  EXPECT_EQ(lcf_exact(NoiseDistribution::complex_bernoulli_symmetric(), real_vec({0, 0}), 0.0).value, 1.0);
  EXPECT_EQ(*lcf_exact(kRad, real_vec({1, 2}), 0.1).exact_value, Rational(1, 4));
  const auto closed = lcf_exact(kRad, real_vec({1, 1}), 1.0);
  EXPECT_EQ(*closed.exact_value, Rational(3, 4));
  EXPECT_NEAR(std::abs(closed.center.real()), 1.0, 1e-9);  // two atoms on the boundary
}

TEST(LcfExact, MatchesRealLineOracle) {
  Xoshiro256pp rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng.below(7);
    std::vector<double> v(n);
    for (auto& x : v) x = static_cast<double>(rng.below(7)) - 3 + 0.25 * static_cast<double>(rng.below(4));
    const double r = 0.25 * static_cast<double>(rng.below(9));
    const double expect = oracle::lcf_real_line(oracle::rademacher(), v, r);
    EXPECT_NEAR(lcf_exact(kRad, ComplexVec(v.begin(), v.end()), r).value, expect, 1e-12);
  }
}

TEST(LcfExact, TwoDimensionalSupNeedsCircleCenters) {
  // three equiprobable atoms on an equilateral triangle of side 1; a disk of
  // radius 0.6 > 1/sqrt(3) covers all of them, no atom- or midpoint-centered
  // disk does (0.6 < sqrt(3)/2)
  const cplx w = std::polar(1.0, 2 * std::numbers::pi / 3);
  const auto dist = NoiseDistribution::from_atoms(
      {{1.0, 1.0 / 3, Rational(1, 3)}, {1.0 + w, 1.0 / 3, Rational(1, 3)}, {0.0, 1.0 / 3, Rational(1, 3)}});
  const ComplexVec v{1.0};
  EXPECT_EQ(*lcf_exact(dist, v, 0.6).exact_value, Rational(1));
  EXPECT_EQ(*lcf_exact(dist, v, 0.55).exact_value, Rational(2, 3));
}

TEST(LcfExact, BudgetAndCapability) {
  EXPECT_THROW(lcf_exact(NoiseDistribution::standard_complex_gaussian(), real_vec({1}), 1.0),
               CapabilityError);
  ComplexVec big(40);
  for (std::size_t i = 0; i < big.size(); ++i) big[i] = std::sqrt(2.0 + static_cast<double>(i));
  EXPECT_THROW(lcf_exact(kRad, big, 0.1, 100000), CapabilityError);
  EXPECT_THROW(lcf_exact(kRad, real_vec({1}), -1.0), PreconditionError);
}

TEST(LcfExact, Properties) {
  Xoshiro256pp rng(17);
  const auto bern = NoiseDistribution::complex_bernoulli_symmetric();
  for (int rep = 0; rep < 150; ++rep) {
    const std::size_t n = 1 + rng.below(5);
    ComplexVec v(n);
    for (auto& z : v)
      z = {static_cast<double>(rng.below(5)) - 2, static_cast<double>(rng.below(3)) - 1};
    const auto& dist = rep % 2 ? kRad : bern;
    const double r = 0.5 * static_cast<double>(rng.below(5));
    const auto base = lcf_exact(dist, v, r);

    // radius monotonicity
    EXPECT_LE(base.value, lcf_exact(dist, v, r + 0.37).value + 1e-15);
    // scaling by a nonzero complex constant
    const cplx c = std::polar(0.5 + rng.uniform() * 3, rng.uniform() * 6.28);
    ComplexVec cv(v);
    for (auto& z : cv) z *= c;
    EXPECT_NEAR(lcf_exact(dist, cv, std::abs(c) * r).value, base.value, 1e-12);
    // coordinate permutation
    ComplexVec pv(v.rbegin(), v.rend());
    EXPECT_NEAR(lcf_exact(dist, pv, r).value, base.value, 1e-12);
    // at least the heaviest atom of the sum law, 1 iff one ball carries all
    const auto law = sum_law(dist, v);
    double top = 0.0;
    for (double p : law.prob) top = std::max(top, p);
    EXPECT_GE(base.value, top - 1e-15);
    double within = 0.0;
    for (std::size_t k = 0; k < law.size(); ++k)
      if (std::abs(law.points[k] - base.center) <= r + 1e-9) within += law.prob[k];
    EXPECT_NEAR(within, base.value, 1e-12);
  }
}

TEST(LcfExact, ErdosBoundSmallN) {
  for (int n = 1; n <= 6; ++n) {
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    const double bound = oracle::binom_middle_over_pow2(n);
    for (;;) {
      ComplexVec v;
      for (int d : digits) v.push_back(1.0 + d);
      EXPECT_LE(lcf_exact(kRad, v, 0.4).value, bound + 1e-15);
      std::size_t k = 0;
      while (k < digits.size() && ++digits[k] == 3) digits[k++] = 0;
      if (k == digits.size()) break;
    }
    EXPECT_DOUBLE_EQ(lcf_exact(kRad, ComplexVec(static_cast<std::size_t>(n), 1.0), 0.4).value, bound);
  }
}

TEST(LcfMonteCarlo, GaussianBallProbability) {
  const auto e = lcf_monte_carlo(NoiseDistribution::standard_complex_gaussian(), real_vec({1}), 0.5,
                                 100000, RandomSource(9));
  EXPECT_NEAR(e.value, 1 - std::exp(-0.25), 0.01);
  EXPECT_EQ(e.method, Method::monte_carlo);
  EXPECT_GT(e.ci95, 0.0);
  EXPECT_FALSE(e.bias_note.empty());
}

TEST(LcfMonteCarlo, AgreesWithExact) {
  const auto e = lcf_monte_carlo(kRad, real_vec({1, 1, 1, 1}), 0.5, 100000, RandomSource(2));
  EXPECT_NEAR(e.value, 0.375, 0.01);
  EXPECT_EQ(lcf_monte_carlo(NoiseDistribution::standard_complex_gaussian(), real_vec({0, 0}), 0.3, 1000,
                            RandomSource(1)).value, 1.0);
  EXPECT_THROW(lcf_monte_carlo(kRad, real_vec({1}), 0.5, 999, RandomSource(1)), PreconditionError);
}

TEST(LcfMonteCarlo, MultiRadiusIsMonotone) {
  const std::vector<double> radii{0.0, 0.1, 0.3, 0.9, 2.7};
  const auto est = lcf_monte_carlo_radii(NoiseDistribution::standard_complex_gaussian(),
                                         real_vec({0.6, 0.8}), radii, 5000, RandomSource(4));
  for (std::size_t k = 1; k < est.size(); ++k) EXPECT_GE(est[k].value, est[k - 1].value);
}

TEST(LcfMonteCarlo, DeterministicAcrossThreads) {
  const auto dist = NoiseDistribution::standard_complex_gaussian();
  set_thread_count(1);
  const auto a = lcf_monte_carlo(dist, real_vec({1, 2, 3}), 0.7, 3000, RandomSource(8));
  set_thread_count(3);
  const auto b = lcf_monte_carlo(dist, real_vec({1, 2, 3}), 0.7, 3000, RandomSource(8));
  set_thread_count(0);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.center, b.center);
}

TEST(LcfConditioned, ExactPointMass) {
  const auto both_plus = ConditionEvent::predicate(
      [](std::span<const cplx> d) { return d[0] == cplx(1.0) && d[1] == cplx(1.0); });
  const auto e = lcf_conditioned_exact(kRad, real_vec({1, 1}), 0.5, both_plus);
  EXPECT_EQ(*e.exact_value, Rational(1));
}

TEST(LcfConditioned, AlwaysMatchesUnconditioned) {
  const auto v = real_vec({1, 0.5, 0.25});
  const auto a = lcf_conditioned(NoiseDistribution::standard_complex_gaussian(), v, 0.4,
                                 ConditionEvent::always(), 20000, RandomSource(6));
  const auto b = lcf_monte_carlo(NoiseDistribution::standard_complex_gaussian(), v, 0.4, 20000, RandomSource(6));
  EXPECT_NEAR(a.value, b.value, a.ci95 + b.ci95);
}

TEST(LcfConditioned, GEpsilonNearUnconditioned) {
  const std::size_t n = 100;
  // a uniformly random direction on the unit sphere of C^n
  const auto dist = NoiseDistribution::standard_complex_gaussian();
  ComplexVec v = sample_vector(dist, n, RandomSource(77));
  const double len = norm2(v);
  for (auto& z : v) z /= len;
  const auto cond = lcf_conditioned(dist, v, 1.0, ConditionEvent::g_epsilon(0.025), 20000, RandomSource(12));
  const auto plain = lcf_monte_carlo(dist, v, 1.0, 20000, RandomSource(12));
  EXPECT_NEAR(cond.value, plain.value, 2 * std::max(cond.ci95, plain.ci95));
}

TEST(LcfConditioned, RareEventRejected) {
  const auto never = ConditionEvent::predicate([](std::span<const cplx>) { return false; });
  try {
    lcf_conditioned(kRad, real_vec({1, 1}), 0.5, never, 2000, RandomSource(1));
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("pilot"), std::string::npos);
  }
}

TEST(ConditioningInequality, Examples) {
  const auto both_plus = ConditionEvent::predicate(
      [](std::span<const cplx> d) { return d[0] == cplx(1.0) && d[1] == cplx(1.0); });
  auto rep = conditioning_inequality_check(kRad, real_vec({1, 1}), 0.5, both_plus);
  EXPECT_DOUBLE_EQ(rep.lhs, 0.5);
  EXPECT_DOUBLE_EQ(rep.rhs, 0.25);
  EXPECT_TRUE(rep.pass);

  rep = conditioning_inequality_check(kRad, real_vec({1, 2, 3}), 0.7, ConditionEvent::always());
  EXPECT_DOUBLE_EQ(rep.lhs, rep.rhs);
  EXPECT_TRUE(rep.pass);

  const auto plus = ConditionEvent::predicate([](std::span<const cplx> d) { return d[0] == cplx(1.0); });
  rep = conditioning_inequality_check(kRad, real_vec({1}), 0.0, plus);
  EXPECT_DOUBLE_EQ(rep.lhs, 0.5);
  EXPECT_DOUBLE_EQ(rep.rhs, 0.5);
  EXPECT_TRUE(rep.pass);

  EXPECT_THROW(conditioning_inequality_check(NoiseDistribution::standard_complex_gaussian(), real_vec({1}),
                                             0.5, plus),
               CapabilityError);
}

TEST(PermTail, Examples) {
  const std::size_t n = 20;
  ComplexVec ones(n, 1.0);
  auto rep = perm_tail_check(ones, ones, static_cast<double>(n), 2000, RandomSource(1));
  EXPECT_EQ(rep.empirical, 0.0);
  EXPECT_TRUE(rep.pass);

  EXPECT_THROW(perm_tail_check(ComplexVec(n, 0.0), ones, 30.0, 100, RandomSource(1)), PreconditionError);
  EXPECT_THROW(perm_tail_check(ones, ones, 1.0, 100, RandomSource(1)), PreconditionError);

  ComplexVec alt(n);
  for (std::size_t i = 0; i < n; ++i) alt[i] = i % 2 ? -1.0 : 1.0;
  rep = perm_tail_check(alt, alt, 8.0, 100000, RandomSource(2));
  EXPECT_NEAR(rep.bound, 4 * std::exp(-64.0 / (128 * 20)), 1e-12);
  EXPECT_TRUE(rep.vacuous);
  EXPECT_TRUE(rep.pass);
  rep = perm_tail_check(alt, alt, 60.0, 100000, RandomSource(3));
  EXPECT_NEAR(rep.bound, 4 * std::exp(-3600.0 / 2560.0), 1e-12);
  EXPECT_EQ(rep.empirical, 0.0);
  EXPECT_TRUE(rep.pass);
}

TEST(ShiftSubgaussian, Examples) {
  auto rep = shift_bound_subgaussian_check(real_vec({1, 0}), real_vec({1, 0}), 1, 1, 5000, RandomSource(1));
  EXPECT_TRUE(rep.degenerate);
  EXPECT_GE(rep.rho_shifted, rep.rho_base);
  EXPECT_TRUE(rep.pass);

  rep = shift_bound_subgaussian_check(real_vec({1, 0}), ComplexVec{1.0, 0.01}, 0.5, 0.5, 20000, RandomSource(2));
  EXPECT_LT(rep.tail, 1e-300 + 3 * std::exp(-2500.0));
  EXPECT_TRUE(rep.pass);

  rep = shift_bound_subgaussian_check(real_vec({1, 0}), real_vec({0, 1}), 0.5, 0.1, 5000, RandomSource(3));
  EXPECT_NEAR(rep.tail, 3 * std::exp(-0.005), 1e-12);
  EXPECT_TRUE(rep.vacuous);
}

TEST(ShiftConditioned, Examples) {
  const std::size_t n = 50;
  const double eps = 0.025;
  const double t = std::pow(50.0, 0.525);
  ComplexVec a(n, 0.0), b(n, 0.0);
  a[0] = 1.0;
  b[0] = 1.0;
  b[1] = 0.01;
  auto rep = shift_bound_conditioned_check(kRad, a, a, eps, 0.5, t, 5000, RandomSource(1));
  EXPECT_TRUE(rep.degenerate);
  EXPECT_TRUE(rep.pass);

  rep = shift_bound_conditioned_check(kRad, a, b, eps, 0.5, t, 5000, RandomSource(2));
  EXPECT_NEAR(rep.tail, 4 * std::exp(-t * t / (64 * std::pow(50.0, 1.05))), 1e-12);
  EXPECT_TRUE(rep.pass);

  EXPECT_THROW(shift_bound_conditioned_check(kRad, a, b, eps, 0.5, 0.0, 5000, RandomSource(3)),
               PreconditionError);
}
