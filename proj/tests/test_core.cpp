#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "anticonc/core/distribution.hpp"
#include "anticonc/core/errors.hpp"
#include "anticonc/core/parallel.hpp"

using namespace anticonc;

namespace {

double prob_of(const NoiseDistribution& d, cplx z) {
  for (const auto& a : d.atoms())
    if (std::abs(a.value - z) < 1e-12) return a.prob;
  return 0.0;
}

}  // namespace

TEST(Parse, ComplexLiterals) {
  EXPECT_EQ(parse_complex("1+0"), cplx(1, 0));
  EXPECT_EQ(parse_complex("-2"), cplx(-2, 0));
  EXPECT_EQ(parse_complex("1-1i"), cplx(1, -1));
  EXPECT_EQ(parse_complex("0.5+0.5i"), cplx(0.5, 0.5));
  EXPECT_EQ(parse_complex("-i"), cplx(0, -1));
  EXPECT_EQ(parse_complex("1e-3+2e+1i"), cplx(1e-3, 20));
  EXPECT_THROW(parse_complex("abc"), PreconditionError);
  EXPECT_EQ(parse_complex_list("1,1, 2+1i").size(), 3u);
}

TEST(Parse, Rationals) {
  EXPECT_EQ(parse_rational("1/4"), Rational(1, 4));
  EXPECT_EQ(parse_rational("0.1"), Rational(1, 10));
  EXPECT_EQ(parse_rational("-0.25"), Rational(-1, 4));
  EXPECT_EQ(parse_rational("1e-2"), Rational(1, 100));
  EXPECT_THROW(parse_rational("x"), PreconditionError);
}

TEST(Distribution, ParseRoundTrip) {
  for (const char* s : {"rademacher", "bernoulli", "gaussian", "gaussian:2", "atoms:1+0i:1/2,0+1i:1/2"}) {
    const auto d = NoiseDistribution::parse(s);
    EXPECT_EQ(NoiseDistribution::parse(d.name()).name(), d.name()) << s;
  }
  const auto d = NoiseDistribution::parse("atoms:1+0:1/3,-1+0:2/3");
  EXPECT_TRUE(d.has_exact_probabilities());
  EXPECT_THROW(NoiseDistribution::parse("atoms:1:0.5,2:0.4"), PreconditionError);
  EXPECT_THROW(NoiseDistribution::parse("cauchy"), PreconditionError);
}

TEST(Distribution, Moments) {
  EXPECT_DOUBLE_EQ(NoiseDistribution::rademacher().variance(), 1.0);
  EXPECT_DOUBLE_EQ(NoiseDistribution::complex_bernoulli_symmetric().variance(), 1.0);
  EXPECT_EQ(NoiseDistribution::complex_bernoulli_symmetric().mean(), cplx(0.0));
  EXPECT_DOUBLE_EQ(NoiseDistribution::standard_complex_gaussian().variance(), 1.0);
}

TEST(SampleVector, PointMassIsZero) {
  const auto v = sample_vector(NoiseDistribution::point_mass(0.0), 3, RandomSource(123));
  for (const auto& z : v) EXPECT_EQ(z, cplx(0.0));
  EXPECT_THROW(sample_vector(NoiseDistribution::rademacher(), 0, RandomSource(1)), PreconditionError);
}

TEST(SampleVector, RademacherMoments) {
  const auto v = sample_vector(NoiseDistribution::rademacher(), 100000, RandomSource(1));
  const cplx mean = std::accumulate(v.begin(), v.end(), cplx(0.0)) / 1e5;
  double second = 0.0;
  for (const auto& z : v) second += std::norm(z);
  EXPECT_LT(std::abs(mean), 3e-2);
  EXPECT_NEAR(second / 1e5, 1.0, 3e-2);
}

TEST(SampleVector, GaussianSecondMoment) {
  const auto v = sample_vector(NoiseDistribution::standard_complex_gaussian(), 100000, RandomSource(1));
  double second = 0.0;
  for (const auto& z : v) second += std::norm(z);
  EXPECT_NEAR(second / 1e5, 1.0, 3e-2);
}

TEST(SampleVector, ReproducibleAcrossThreadCounts) {
  const auto dist = NoiseDistribution::standard_complex_gaussian();
  const RandomSource src(42, 7);
  auto draw_all = [&] {
    std::vector<cplx> out(2000);
    parallel_for(out.size(), [&](std::size_t t) {
      auto rng = src.engine(t);
      out[t] = dist.sample(rng);
    });
    return out;
  };
  set_thread_count(1);
  const auto one = draw_all();
  set_thread_count(4);
  const auto four = draw_all();
  set_thread_count(0);
  EXPECT_EQ(one, four);
  EXPECT_EQ(sample_vector(dist, 5, src), sample_vector(dist, 5, src));
  EXPECT_NE(sample_vector(dist, 5, src), sample_vector(dist, 5, src.derive(1)));
}

TEST(DifferenceDistribution, Rademacher) {
  const auto d = difference_distribution(NoiseDistribution::rademacher());
  ASSERT_EQ(d.atoms().size(), 3u);
  EXPECT_DOUBLE_EQ(prob_of(d, -2.0), 0.25);
  EXPECT_DOUBLE_EQ(prob_of(d, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(prob_of(d, 2.0), 0.25);
  EXPECT_TRUE(d.has_exact_probabilities());
}

TEST(DifferenceDistribution, PointMassAndTwoAtom) {
  const auto pm = difference_distribution(NoiseDistribution::point_mass({3.0, -1.0}));
  ASSERT_EQ(pm.atoms().size(), 1u);
  EXPECT_EQ(pm.atoms()[0].value, cplx(0.0));

  const auto d = difference_distribution(NoiseDistribution::parse("atoms:1+0i:1/2,0+1i:1/2"));
  ASSERT_EQ(d.atoms().size(), 3u);
  EXPECT_DOUBLE_EQ(prob_of(d, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(prob_of(d, {1.0, -1.0}), 0.25);
  EXPECT_DOUBLE_EQ(prob_of(d, {-1.0, 1.0}), 0.25);
}

TEST(DifferenceDistribution, SymmetricClosure) {
  Xoshiro256pp rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<Atom> atoms;
    const int k = 1 + static_cast<int>(rng.below(4));
    for (int j = 0; j < k; ++j)
      atoms.push_back({{static_cast<double>(rng.below(5)) - 2, static_cast<double>(rng.below(3)) - 1},
                       1.0 / k, Rational(1, k)});
    const auto d = difference_distribution(NoiseDistribution::from_atoms(atoms));
    for (const auto& a : d.atoms()) EXPECT_EQ(prob_of(d, -a.value), a.prob);
  }
  const auto g = difference_distribution(NoiseDistribution::standard_complex_gaussian());
  EXPECT_DOUBLE_EQ(g.variance(), 2.0);
}

TEST(Goodness, Rademacher) {
  const auto cert = goodness_constant(NoiseDistribution::rademacher());
  EXPECT_DOUBLE_EQ(cert.c, 2.0);
  EXPECT_TRUE(cert.exact);
  EXPECT_DOUBLE_EQ(cert.coverage, 0.5);
}

TEST(Goodness, PointMassRejected) {
  EXPECT_THROW(goodness_constant(NoiseDistribution::point_mass(1.0)), PreconditionError);
}

TEST(Goodness, GaussianCertificate) {
  const auto cert = goodness_constant(NoiseDistribution::standard_complex_gaussian(), 0.0, 1'000'000);
  EXPECT_FALSE(cert.exact);
  EXPECT_LE(cert.c, 4.0);
  // |d|^2 ~ Exp(mean 2): the analytic coverage at the certified C clears 1/C
  const double c = cert.c;
  const double analytic = std::exp(-1.0 / (2 * c * c)) - std::exp(-c * c / 2);
  EXPECT_GE(analytic, 1.0 / c);
  // the analytic minimal C is about 1.68
  EXPECT_GT(c, 1.6);
}

TEST(Goodness, DefiningInequalityHoldsExactly) {
  Xoshiro256pp rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<Atom> atoms;
    const int k = 2 + static_cast<int>(rng.below(3));
    for (int j = 0; j < k; ++j)
      atoms.push_back({{(static_cast<double>(rng.below(9)) - 4) / 2, (static_cast<double>(rng.below(5)) - 2) / 3},
                       1.0 / k, Rational(1, k)});
    const auto dist = NoiseDistribution::from_atoms(atoms);
    if (dist.variance() == 0.0) continue;
    const auto cert = goodness_constant(dist);
    double cover = 0.0, below = 0.0;
    const auto diff = difference_distribution(dist);
    for (const auto& a : diff.atoms()) {
      const double m = std::abs(a.value);
      if (m >= 1 / cert.c - 1e-12 && m <= cert.c + 1e-12) cover += a.prob;
      const double c2 = cert.c * (1 - 1e-6);  // anything smaller fails
      if (m >= 1 / c2 && m <= c2) below += a.prob;
    }
    EXPECT_GE(cover, 1 / cert.c - 1e-12);
    if (cert.c > 1.0) EXPECT_LT(below, 1 / (cert.c * (1 - 1e-6)));
  }
}
