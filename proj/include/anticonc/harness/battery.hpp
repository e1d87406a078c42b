#pragma once

#include <cstdint>
#include <vector>

#include "anticonc/harness/report.hpp"

namespace anticonc::battery {

/// Every v in {1,2,3}^n, n <= max_n: rho_r(v) <= binom(n, n/2) / 2^n exactly
/// (Rademacher, r < 1/2), with equality on the all-ones vector.
CheckResult erdos_exhaustive(unsigned max_n, double r = 0.4);

/// Exact discrete instances of rho_r(v) >= rho_{r, xi|G}(v) Pr(G).
CheckResult conditioning_random(std::size_t instances, std::uint64_t seed);

/// Permutation tail bound with non-vacuous right-hand sides.
CheckResult perm_tail_random(std::size_t instances, std::size_t trials, std::uint64_t seed);

/// Subgaussian shift stability for gaussian noise.
CheckResult shift_subgaussian_random(std::size_t instances, std::size_t trials, std::uint64_t seed);

/// rho_r(v) <= e^{pi r^2} P_xi(v) on {0,1,2}^n, n <= max_n.
CheckResult majorization_exhaustive(unsigned max_n, const std::vector<double>& radii);

/// P(v) P(w) <= 2 P(v w) on random small integer vectors.
CheckResult doubling_random(std::size_t instances, std::uint64_t seed);

/// Refined diophantine bound on constructed real vectors whose annulus
/// hypothesis is grid-certified. Every instance uses f = 0.03, g = 35.
CheckResult diophantine_constructed(std::size_t instances, std::size_t trials, std::uint64_t seed);

/// Lemma on R_k^{-1} over all of (F_3 + iF_3)^2, k = 1.
CheckResult lemma16_exhaustive(const std::vector<Rational>& alphas);

/// Counting lemma over every (p, k, t, alpha) in the grids, n = 2, s = 1.
CheckResult counting_lemma_grid(const std::vector<std::uint32_t>& primes, const std::vector<unsigned>& ks,
                                const std::vector<Rational>& ts, const std::vector<Rational>& alphas);

CheckResult cauchy_davenport_random(std::size_t instances, const std::vector<std::uint32_t>& primes,
                                    std::uint64_t seed);

/// t P'_m(I) subset of P'_{t^2 m}(I) on random instances, t <= max_t.
CheckResult sumset_iteration_random(std::size_t instances, const std::vector<std::uint32_t>& primes,
                                    unsigned max_t, std::uint64_t seed);

/// Pr(s_n(M + N) <= eta) <= factor sqrt(n) eta + 3 ci for every (n, eta).
/// `matrix` is a build_matrix spec evaluated per n.
CheckResult tail_bound(const std::string& name, const std::string& matrix, const std::vector<std::size_t>& ns,
                       const std::vector<double>& etas, double factor, std::size_t trials, std::uint64_t seed);

/// |I^c| <= 2 n^{1-eps} on random Rademacher matrices.
CheckResult good_rows_random(std::size_t matrices, std::size_t n, double eps, std::uint64_t seed);

CheckResult operator_norm_tail(std::size_t n, double l, std::size_t trials, std::uint64_t seed);

/// Internal SVD consistency: s_min <= |A x| / |x| and agreement with the
/// full spectrum on random complex matrices.
CheckResult svd_consistency(std::size_t instances, std::size_t max_n, std::uint64_t seed);

}  // namespace anticonc::battery
