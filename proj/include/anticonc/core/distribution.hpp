#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anticonc/core/random.hpp"
#include "anticonc/core/types.hpp"

namespace anticonc {

enum class NoiseKind {
  rademacher,                   // uniform on {-1, +1}
  complex_bernoulli_symmetric,  // uniform on {1, -1, i, -i}
  complex_gaussian,             // Re, Im independent N(0, variance/2)
  discrete_atoms,
};

struct Atom {
  cplx value;
  double prob = 0.0;
  /// Present when the probability was supplied as an exact rational.
  std::optional<Rational> exact;
};

/// A complex random variable: one of the named laws or a finite atom list.
/// The named discrete laws carry their atoms so every discrete law supports
/// exact enumeration.
class NoiseDistribution {
 public:
  static NoiseDistribution rademacher();
  static NoiseDistribution complex_bernoulli_symmetric();
  static NoiseDistribution standard_complex_gaussian() { return complex_gaussian(1.0); }
  static NoiseDistribution complex_gaussian(double variance);
  static NoiseDistribution point_mass(cplx c);
  /// Duplicate atom values are merged. Throws PreconditionError unless the
  /// probabilities are nonnegative and sum to 1 within 1e-12 (exactly, when
  /// every atom carries a rational).
  static NoiseDistribution from_atoms(std::vector<Atom> atoms);

  /// Config syntax: `rademacher`, `bernoulli`, `gaussian`, `gaussian:<var>`,
  /// `point:<re+im>`, `atoms:<re+im>:<prob>,<re+im>:<prob>,...`.
  static NoiseDistribution parse(const std::string& text);
  std::string name() const;

  NoiseKind kind() const noexcept { return kind_; }
  bool is_discrete() const noexcept { return kind_ != NoiseKind::complex_gaussian; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  bool has_exact_probabilities() const noexcept;

  cplx mean() const noexcept;
  /// E|xi - E xi|^2.
  double variance() const noexcept;
  /// Variance parameter of the complex_gaussian kind.
  double gaussian_variance() const noexcept { return gauss_var_; }

  cplx sample(Xoshiro256pp& rng) const noexcept;
  void sample(Xoshiro256pp& rng, std::span<cplx> out) const noexcept;

 private:
  NoiseKind kind_ = NoiseKind::discrete_atoms;
  std::vector<Atom> atoms_;
  std::vector<double> cdf_;
  double gauss_var_ = 0.0;
};

/// n i.i.d. draws from the engine of `trial` in `src`.
ComplexVec sample_vector(const NoiseDistribution& dist, std::size_t n, const RandomSource& src,
                         std::uint64_t trial = 0);

/// Exact law of xi_1 - xi_2 for independent copies.
NoiseDistribution difference_distribution(const NoiseDistribution& dist);

struct GoodnessCertificate {
  double c = 1.0;
  /// Probability Pr(1/C <= |xi_1 - xi_2| <= C) at the returned C (point
  /// estimate for continuous laws).
  double coverage = 0.0;
  bool exact = false;
  /// One-sided confidence level of a Monte Carlo certificate (1 for exact).
  double confidence = 1.0;
  std::size_t trials = 0;
};

/// Smallest C >= 1 with Pr(1/C <= |xi_1 - xi_2| <= C) >= 1/C for discrete
/// laws; for continuous laws a Monte Carlo certificate: the smallest grid C
/// whose lower confidence bound minus `tol` still clears 1/C.
GoodnessCertificate goodness_constant(const NoiseDistribution& dist, double tol = 0.0,
                                      std::size_t trials = 1'000'000,
                                      const RandomSource& src = RandomSource(0x600d));

}  // namespace anticonc
