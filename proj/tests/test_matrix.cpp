#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "anticonc/core/errors.hpp"
#include "anticonc/core/parallel.hpp"
#include "anticonc/matrix/singular.hpp"
#include "anticonc/matrix/smoothed.hpp"
#include "oracles.hpp"

using namespace anticonc;

namespace {

ComplexMatrix random_matrix(Xoshiro256pp& rng, std::size_t n, double scale = 1.0) {
  ComplexMatrix m(n, n);
  for (auto& z : m.data()) {
    const auto g = rng.normal_pair();
    z = scale * cplx(g[0], g[1]);
  }
  return m;
}

// Product of a few random Householder reflections: a random unitary.
ComplexMatrix random_unitary(Xoshiro256pp& rng, std::size_t n) {
  ComplexMatrix u = ComplexMatrix::identity(n);
  for (int r = 0; r < 3; ++r) {
    ComplexVec v(n);
    double vv = 0;
    for (auto& c : v) {
      const auto g = rng.normal_pair();
      c = {g[0], g[1]};
      vv += std::norm(c);
    }
    ComplexMatrix h = ComplexMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h(i, j) -= 2.0 * v[i] * std::conj(v[j]) / vv;
    u = u * h;
  }
  return u;
}

double oracle_smallest(const ComplexMatrix& m) {
  return oracle::jacobi_singular_values(std::vector<cplx>(m.data().begin(), m.data().end()), m.rows()).front();
}

}  // namespace

TEST(SmallestSingularValue, Examples) {
  EXPECT_NEAR(smallest_singular_value(ComplexMatrix::identity(3)), 1.0, 1e-10);
  const ComplexVec d{3.0, 1.0, 2.0};
  EXPECT_NEAR(smallest_singular_value(ComplexMatrix::diagonal(d)), 1.0, 1e-10);
  EXPECT_NEAR(smallest_singular_value(ComplexMatrix::diagonal(d), 1e-15), 1.0, 1e-15);
  ComplexMatrix ones(2, 2);
  for (auto& z : ones.data()) z = 1.0;
  EXPECT_EQ(smallest_singular_value(ones), 0.0);
  EXPECT_EQ(smallest_singular_value(ComplexMatrix(4, 4)), 0.0);
  EXPECT_THROW(smallest_singular_value(ComplexMatrix(2, 3)), PreconditionError);
  const ComplexVec cd{cplx(0, -5), cplx(3, 4), cplx(-0.5, 0)};
  EXPECT_NEAR(smallest_singular_value(ComplexMatrix::diagonal(cd)), 0.5, 0.5e-10);
  EXPECT_NEAR(operator_norm(ComplexMatrix::diagonal(cd)), 5.0, 1e-9);
}

TEST(SmallestSingularValue, MatchesJacobiOracle) {
  Xoshiro256pp rng(101);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng.below(8);
    const ComplexMatrix m = random_matrix(rng, n);
    const double want = oracle_smallest(m);
    EXPECT_NEAR(smallest_singular_value(m), want, 1e-8 * want) << "n=" << n;
  }
}

TEST(SmallestSingularValue, AllSingularValuesMatchOracle) {
  Xoshiro256pp rng(102);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 2 + rng.below(7);
    const ComplexMatrix m = random_matrix(rng, n, 3.0);
    const auto want = oracle::jacobi_singular_values(std::vector<cplx>(m.data().begin(), m.data().end()), n);
    const auto got = singular_values(m);
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(got[k], want[k], 1e-9 * want.back());
    EXPECT_NEAR(operator_norm(m), want.back(), 1e-9 * want.back());
  }
}

TEST(SmallestSingularValue, UnitaryInvariance) {
  Xoshiro256pp rng(103);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 2 + rng.below(7);
    const ComplexMatrix m = random_matrix(rng, n);
    const ComplexMatrix umv = random_unitary(rng, n) * m * random_unitary(rng, n);
    const double s = smallest_singular_value(m);
    EXPECT_NEAR(smallest_singular_value(umv), s, 1e-8 * std::max(1.0, s));
  }
}

TEST(SmallestSingularValue, VariationalAndWeyl) {
  Xoshiro256pp rng(104);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + rng.below(10);
    const ComplexMatrix m = random_matrix(rng, n);
    const double s = smallest_singular_value(m);
    for (int k = 0; k < 100; ++k) {
      ComplexVec x(n);
      for (auto& c : x) {
        const auto g = rng.normal_pair();
        c = {g[0], g[1]};
      }
      const double len = norm2(x);
      for (auto& c : x) c /= len;
      EXPECT_LE(s, norm2(m.apply(x)) + 1e-12);
    }
    const ComplexMatrix e = random_matrix(rng, n, 0.01 * rng.uniform());
    EXPECT_LE(std::abs(smallest_singular_value(m + e) - s), e.frobenius_norm() + 1e-8);
  }
}

TEST(SmallestSingularValue, IllConditionedRelativeAccuracy) {
  // diag(1, 1e-6) rotated by unitaries keeps s_n = 1e-6.
  Xoshiro256pp rng(105);
  const ComplexVec d{1.0, 1e-3, 1e-6};
  const ComplexMatrix m = random_unitary(rng, 3) * ComplexMatrix::diagonal(d) * random_unitary(rng, 3);
  EXPECT_NEAR(smallest_singular_value(m), 1e-6, 1e-13);
}

TEST(TailCurve, Examples) {
  const auto zero = tail_curve(ComplexMatrix(3, 3), NoiseDistribution::point_mass(0.0), {0.1, 0.0}, 100,
                               RandomSource(1));
  EXPECT_EQ(zero.etas, (std::vector<double>{0.0, 0.1}));
  EXPECT_EQ(zero.hits, (std::vector<std::uint64_t>{100, 100}));

  ComplexMatrix big = ComplexMatrix::identity(10);
  big *= 1e6;
  const auto far = tail_curve(big, NoiseDistribution::rademacher(), {1e3}, 100, RandomSource(2));
  EXPECT_EQ(far.hits[0], 0u);
  EXPECT_EQ(far.n, 10u);
  EXPECT_EQ(far.dist_id, "rademacher");
}

TEST(TailCurve, MonotoneAndReproducible) {
  const std::vector<double> etas{1e-3, 1e-2, 0.05, 0.1, 0.3};
  const auto g = NoiseDistribution::standard_complex_gaussian();
  set_thread_count(1);
  const auto a = tail_curve(ComplexMatrix(6, 6), g, etas, 400, RandomSource(9));
  set_thread_count(3);
  const auto b = tail_curve(ComplexMatrix(6, 6), g, etas, 400, RandomSource(9));
  set_thread_count(0);
  EXPECT_EQ(a.hits, b.hits);
  for (std::size_t k = 1; k < a.hits.size(); ++k) EXPECT_LE(a.hits[k - 1], a.hits[k]);
  EXPECT_LE(a.hits.back(), a.trials);
}

TEST(TailCurve, EdelmanSmallScale) {
  const auto g = NoiseDistribution::standard_complex_gaussian();
  const auto c = tail_curve(ComplexMatrix(10, 10), g, {0.01, 0.05}, 2000, RandomSource(3));
  for (std::size_t k = 0; k < c.etas.size(); ++k) {
    const double p = c.empirical(k);
    EXPECT_LE(p, reference_bound(BoundKind::edelman, {10, c.etas[k]}) + 3 * binomial_ci95(p, c.trials));
  }
}

TEST(ReferenceBound, Examples) {
  EXPECT_NEAR(reference_bound(BoundKind::edelman, {100, 1e-3}), 0.01, 1e-15);
  EXPECT_NEAR(reference_bound(BoundKind::sst, {4, 0.1}), 0.47, 1e-15);
  EXPECT_EQ(reference_bound(BoundKind::edelman, {7, 0.0}), 0.0);
  EXPECT_EQ(reference_bound(BoundKind::sst, {7, 0.0}), 0.0);
  EXPECT_NEAR(reference_bound(BoundKind::theorem13, {10, 0, 0.2, 3}), 0.6, 1e-15);
  EXPECT_EQ(parse_bound_kind("sst"), BoundKind::sst);
}

TEST(Theorem13Threshold, Examples) {
  EXPECT_EQ(theorem13_threshold(1.0, 5, 10, 2).value, 1.0);
  const auto t = theorem13_threshold(0.1, 100, 100, 1);
  // -(300 ln 10 / ln 100) ln(110 * 10 * 100^2) = -150 ln(1.1e7).
  EXPECT_NEAR(t.log_value, -150 * std::log(1.1e7), 1e-9);
  EXPECT_NEAR(t.log10_value, -150 * std::log10(1.1e7), 1e-9);
  EXPECT_EQ(t.value, 0.0);
  double prev = -1e300;
  for (double a = 0.05; a <= 1.0; a += 0.05) {
    const double v = theorem13_threshold(a, 10, 50, 1).log_value;
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_THROW(theorem13_threshold(1.5, 1, 10, 1), PreconditionError);
}

TEST(OperatorNormTail, Examples) {
  const auto r = operator_norm_tail_check(NoiseDistribution::rademacher(), 10, 4, 2000, RandomSource(4));
  EXPECT_NEAR(r.mean_frobenius_sq, 100.0, 1e-9);
  EXPECT_EQ(r.frobenius_rate, 0.0);
  EXPECT_TRUE(r.pass);
  const auto one = operator_norm_tail_check(NoiseDistribution::rademacher(), 5, 1, 200, RandomSource(5));
  EXPECT_EQ(one.bound, 1.0);
  EXPECT_TRUE(one.pass);
  const auto g = operator_norm_tail_check(NoiseDistribution::standard_complex_gaussian(), 20, 2, 1000, RandomSource(6));
  EXPECT_TRUE(g.pass);
  EXPECT_NEAR(g.mean_frobenius_sq, 400.0, 4 * 20.0 / std::sqrt(1000.0) * 20);
}

TEST(GoodRows, Examples) {
  const auto z = good_row_classify(ComplexMatrix(5, 5), 0.1);
  EXPECT_EQ(z.good_rows.size(), 5u);
  Xoshiro256pp rng(7);
  ComplexMatrix m(8, 8);
  for (auto& c : m.data()) c = rng.below(2) ? 1.0 : -1.0;
  for (auto& c : m.row(3)) c *= 64.0;  // n^2
  const auto r = good_row_classify(m, 0.1);
  EXPECT_EQ(std::count(r.good_rows.begin(), r.good_rows.end(), 3u), 0);
  EXPECT_GE(r.fail_norm, 1u);
  EXPECT_THROW(good_row_classify(m, 0.5), PreconditionError);
}

TEST(GoodRows, RademacherRegularization) {
  const auto rad = NoiseDistribution::rademacher();
  const double cap = 2 * std::pow(100.0, 0.975);
  for (int t = 0; t < 50; ++t) {
    const auto rows = good_row_classify(perturbed_matrix(ComplexMatrix(100, 100), rad, RandomSource(8), t), 0.025);
    EXPECT_EQ(rows.fail_norm, 0u);
    EXPECT_LE(static_cast<double>(rows.bad_count()), cap);
  }
}

TEST(Compressible, Examples) {
  EXPECT_EQ(compressible_distance(ComplexVec{1.0, 0.0, 0.0}, 1), 0.0);
  EXPECT_NEAR(compressible_distance(ComplexVec{std::sqrt(0.5), std::sqrt(0.5)}, 1), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(compressible_distance(ComplexVec(4, 0.5), 2), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(compressible_distance(ComplexVec{cplx(0, 3), 0.1, -4.0, cplx(0.2, 0)}, 2), std::sqrt(0.05), 1e-15);
  EXPECT_TRUE(is_compressible(ComplexVec(4, 0.5), 2, 0.71));
  EXPECT_FALSE(is_compressible(ComplexVec(4, 0.5), 2, 0.7));
}

TEST(Pigeonhole, Examples) {
  const std::vector<double> c(5, 0.3);
  EXPECT_EQ(pigeonhole_scale(c, 2), 0u);
  EXPECT_EQ(pigeonhole_scale(std::vector<double>{0.1, 0.15, 0.9, 0.95}, 2), 0u);
  EXPECT_EQ(pigeonhole_scale(std::vector<double>{0.1, 0.3, 0.5, 0.9}, 2), 1u);
  EXPECT_THROW(pigeonhole_scale(std::vector<double>{0.1, 0.25, 0.9}, 2), PreconditionError);
  EXPECT_THROW(pigeonhole_scale(std::vector<double>{0.5, 0.4}, 2), PreconditionError);
}

TEST(Pigeonhole, GuaranteeImpliesExistence) {
  Xoshiro256pp rng(9);
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<double> rho(2 + rng.below(6));
    double x = 0.001 + 0.1 * rng.uniform();
    for (auto& r : rho) {
      x = std::min(1.0, x * (1 + 3 * rng.uniform()));
      r = x;
    }
    const double factor = 1.01 + 3 * rng.uniform();
    if (std::pow(factor, static_cast<double>(rho.size() - 1)) >= rho.back() / rho.front()) {
      const std::size_t j = pigeonhole_scale(rho, factor);
      EXPECT_LE(rho[j + 1], factor * rho[j]);
      for (std::size_t i = 0; i < j; ++i) EXPECT_GT(rho[i + 1], factor * rho[i]);
    }
  }
}

TEST(RichPoor, Examples) {
  const auto rad = NoiseDistribution::rademacher();
  const ComplexVec e1{1.0, 0.0, 0.0, 0.0};
  const auto boundary = rich_poor_classify(e1, 0, 1.5, 1e-3, rad, 0.1, 1000, RandomSource(1));
  EXPECT_TRUE(boundary.boundary);
  EXPECT_EQ(boundary.classification, RichPoor::poor);

  // S = n / sqrt(beta) = 8, radius = 2 eta S sqrt(n) = 32 eta >= 2 at eta = 1/16.
  const auto rich = rich_poor_classify(e1, 0, 0.25, 1.0 / 16, rad, 0.25, 2000, RandomSource(2));
  EXPECT_NEAR(rich.radius, 2.0, 1e-12);
  EXPECT_EQ(rich.lcf.value, 1.0);
  EXPECT_EQ(rich.classification, RichPoor::rich);
  ASSERT_TRUE(rich.scale_index);
  EXPECT_EQ(*rich.scale_index, 0u);
  EXPECT_EQ(*rich.level_index, 0);

  Xoshiro256pp rng(3);
  ComplexVec u(20);
  for (auto& c : u) c = {rng.uniform() - 0.5, rng.uniform() - 0.5};
  const double len = norm2(u);
  for (auto& c : u) c /= len;
  const auto poor = rich_poor_classify(u, 0, 0.01, 1e-6, NoiseDistribution::standard_complex_gaussian(), 0.25,
                                       5000, RandomSource(4));
  // Unconditioned sum is CN(0, 1): ball mass 1 - exp(-r^2) at r ~ 1.8e-3.
  EXPECT_LT(1 - std::exp(-poor.radius * poor.radius), 1e-5);
  EXPECT_EQ(poor.classification, RichPoor::poor);

  EXPECT_THROW(rich_poor_classify(ComplexVec{1.0, 1.0}, 0, 0.1, 0.1, rad, 0.1, 1000, RandomSource(1)),
               PreconditionError);
}

TEST(RichPoor, ScalesAreMonotoneAndIndexed) {
  const auto rad = NoiseDistribution::rademacher();
  const ComplexVec v(16, 0.25);
  RichPoorOptions opts;
  opts.j_max = 6;
  opts.f_beta = 4.0;
  const auto r = rich_poor_classify(v, 0, 0.05, 1e-4, rad, 0.25, 4000, RandomSource(5), opts);
  ASSERT_EQ(r.classification, RichPoor::rich);
  ASSERT_EQ(r.scale_rhos.size(), 7u);
  for (std::size_t j = 1; j < r.scale_rhos.size(); ++j) EXPECT_GE(r.scale_rhos[j], r.scale_rhos[j - 1]);
  ASSERT_TRUE(r.scale_index);
  const double rho = r.scale_rhos[*r.scale_index];
  EXPECT_GT(rho, std::exp2(-*r.level_index - 1));
  EXPECT_LE(rho, std::exp2(-*r.level_index));
}
