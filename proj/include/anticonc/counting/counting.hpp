#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "anticonc/core/distribution.hpp"
#include "anticonc/core/types.hpp"

namespace anticonc {

/// Element of F_p + iF_p, residues in [0, p).
struct FpElem {
  std::uint32_t re = 0;
  std::uint32_t im = 0;
  friend bool operator==(const FpElem&, const FpElem&) = default;
};

bool is_prime(std::uint64_t p);

class FpVector {
 public:
  /// Reduces every entry mod p. Throws PreconditionError unless p is an odd prime.
  FpVector(std::uint32_t p, const std::vector<std::pair<std::int64_t, std::int64_t>>& entries);
  FpVector(std::uint32_t p, std::vector<FpElem> entries);

  std::uint32_t p() const noexcept { return p_; }
  std::size_t size() const noexcept { return e_.size(); }
  const std::vector<FpElem>& entries() const noexcept { return e_; }
  const FpElem& operator[](std::size_t i) const { return e_[i]; }
  /// The restriction v_I; `mask` bit i selects coordinate i.
  FpVector restrict(std::uint64_t mask) const;
  /// Every coordinate multiplied by the scalar c.
  FpVector scaled(FpElem c) const;
  /// "1+2i,0,3" style rendering with reduced residues.
  std::string to_string() const;
  /// Inverse of to_string, entries given as Gaussian integers.
  static FpVector parse(std::uint32_t p, const std::string& text);

 private:
  std::uint32_t p_;
  std::vector<FpElem> e_;
};

/// Coordinate-wise reduction of Re and Im mod p.
FpVector phi_p(const GaussianIntVector& v, std::uint32_t p);

inline constexpr double kRkBudget = 1e9;

/// Number of (index sequence, sign sequence) pairs with
/// +-v_{i_1} +- ... +- v_{i_2k} = 0 and at least ceil((1 + alpha) k)
/// distinct indices. Meet in the middle over half sequences; throws
/// CapabilityError when (2n)^{2k} exceeds `budget`.
BigInt rk_alpha(const FpVector& v, unsigned k, const Rational& alpha, double budget = kRkBudget);

/// ceil((1 + alpha) k), the distinct-index threshold.
unsigned distinct_threshold(unsigned k, const Rational& alpha);

struct Lemma16Report {
  BigInt lhs;             // R_k^{-1}(v)
  BigInt r_alpha;         // R_k^alpha(v)
  BigInt combinatorial;   // ceil((40 k^{1-alpha} n^{1+alpha})^k)
  BigInt rhs;
  bool pass = false;
};
Lemma16Report lemma16_check(const FpVector& v, unsigned k, const Rational& alpha);

/// R_k^alpha(v_I) >= t 2^{2k} |I|^{2k} / p for every I with |I| >= s, compared exactly.
bool b_set_membership(const FpVector& v, unsigned k, unsigned s, const Rational& t,
                      const Rational& alpha);

struct CountingReport {
  unsigned n = 0, k = 0, s = 0;
  std::uint32_t p = 0;
  Rational t, alpha;
  BigInt card;       // |B^alpha_{k,s,>=t}(n)|
  BigInt space;      // p^{2n}
  Rational bound;    // (alpha t)^{s-n} p^{n+s}
  bool pass = false;
  bool vacuous = false;  // bound >= p^{2n}
};

/// Exhaustive over (F_p + iF_p)^n; requires p^{2n} <= 1e6.
CountingReport counting_lemma_verify(unsigned n, std::uint32_t p, unsigned k, unsigned s,
                                     const Rational& t, const Rational& alpha);

struct CauchyDavenportReport {
  std::int64_t lhs = 0;  // |A + B|
  std::int64_t rhs = 0;  // min(p^2, |A| + |B| - p)
  bool pass = false;
};
CauchyDavenportReport cauchy_davenport_check(std::span<const FpElem> a, std::span<const FpElem> b,
                                             std::uint32_t p);

/// P'_m(I) = { r : sum_{i in I} || Re{v_i r} / p ||^2_{R/Z} <= c m }, exactly.
std::vector<FpElem> p_prime_set(const FpVector& v, std::uint64_t index_mask, const Rational& m,
                                const Rational& c_level);

struct SumsetIterationReport {
  std::size_t base_size = 0;     // |P'_m(I)|
  std::size_t sumset_size = 0;   // |t P'_m(I)|
  std::size_t target_size = 0;   // |P'_{t^2 m}(I)|
  bool included = false;         // t P'_m(I) subset of P'_{t^2 m}(I)
  /// |P'_{t^2 m}(I)| >= min(p^2, t |P'_m(I)| - t p), the Cauchy-Davenport consequence.
  bool size_consequence = false;
  bool pass = false;
};
SumsetIterationReport sumset_iteration_check(const FpVector& v, std::uint64_t index_mask,
                                             const Rational& m, unsigned t, const Rational& c_level);

struct VRhoReport {
  std::vector<GaussianIntVector> members;
  std::size_t image_size = 0;  // |phi_p(V_rho)|
  std::uint32_t p = 0;
  std::size_t box_size = 0;
};

/// V_rho restricted to the box |Re|, |Im| <= coord_bound, by lcf_exact at
/// r = 1. Requires (2 coord_bound + 1)^{2n} <= 1e6 and a discrete law.
VRhoReport enumerate_v_rho(unsigned n, unsigned coord_bound, const NoiseDistribution& dist,
                           const Rational& rho, std::uint32_t p);

struct Theorem12Report {
  double log_term1 = 0.0;  // natural log of (5 n p^2 / s)^s
  double log_term2 = 0.0;  // natural log of (C rho^{-1} / sqrt(s/k))^n
  double log_bound = 0.0;  // log(term1 + term2)
  double log10_bound = 0.0;
  // Parameter constraints of the theorem.
  bool k_at_least_1000_cxi = false;
  bool k_at_most_sqrt_s = false;
  bool s_at_most_n_over_log_n = false;
  bool rho_large_enough = false;  // rho >= C max(e^{-s/k}, s^{-k/4})
  bool p_in_range = false;        // 2^{n/s} >= p >= C / rho
  bool constraints_hold() const {
    return k_at_least_1000_cxi && k_at_most_sqrt_s && s_at_most_n_over_log_n && rho_large_enough &&
           p_in_range;
  }
};
Theorem12Report theorem12_bound(unsigned n, unsigned s, unsigned k, std::uint32_t p, double rho,
                                double c, double c_xi = 1.0);

}  // namespace anticonc
