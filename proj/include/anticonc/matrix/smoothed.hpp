#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anticonc/concentration/levy.hpp"
#include "anticonc/core/distribution.hpp"

namespace anticonc {

/// M + N with N_ij i.i.d. from `dist`, drawn row-major from the engine of `trial`.
ComplexMatrix perturbed_matrix(const ComplexMatrix& m, const NoiseDistribution& dist,
                               const RandomSource& src, std::uint64_t trial);

struct TailCurve {
  std::vector<double> etas;             // ascending
  std::vector<std::uint64_t> hits;      // #{trials : s_n <= eta}
  std::uint64_t trials = 0;
  std::size_t n = 0;
  std::string dist_id;
  std::string matrix_id;
  std::uint64_t seed = 0;
  double empirical(std::size_t k) const { return static_cast<double>(hits[k]) / static_cast<double>(trials); }
};

/// Samples s_n(M + N_n) per trial. Hits are counted with s_n <= eta.
TailCurve tail_curve(const ComplexMatrix& m, const NoiseDistribution& dist, std::vector<double> etas,
                     std::size_t trials, const RandomSource& src, std::string matrix_id = "custom");

enum class BoundKind { edelman, sst, theorem13 };
std::string to_string(BoundKind k);
BoundKind parse_bound_kind(const std::string& s);

struct BoundParams {
  std::size_t n = 0;
  double eta = 0.0;
  double alpha = 0.0;  // theorem13
  double c = 1.0;      // theorem13
};

/// edelman: sqrt(n) eta; sst: 2.35 sqrt(n) eta; theorem13: C alpha.
double reference_bound(BoundKind kind, const BoundParams& p);

struct Threshold {
  double log_value = 0.0;  // natural log of eta*
  double log10_value = 0.0;
  double value = 0.0;      // exp(log_value); underflows to 0 when astronomically small
};

/// eta* = (C (|M| + sqrt n) alpha^{-1} n^2)^{-300 log(1/alpha) / log n}, in log space.
Threshold theorem13_threshold(double alpha, double norm_m, std::size_t n, double c);

struct OperatorNormTailReport {
  double threshold = 0.0;       // sqrt(L) n
  double bound = 0.0;           // 1 / L
  double frobenius_rate = 0.0;  // Pr(|N|_F >= threshold), conservative majorant
  double frobenius_ci = 0.0;
  std::optional<double> operator_rate;  // true operator norm, n <= 50
  std::optional<double> operator_ci;
  double mean_frobenius_sq = 0.0;
  std::size_t trials = 0;
  bool pass = false;
};
OperatorNormTailReport operator_norm_tail_check(const NoiseDistribution& dist, std::size_t n, double l,
                                                std::size_t trials, const RandomSource& src);

struct RowClassification {
  double epsilon = 0.0;
  std::vector<std::size_t> good_rows;  // I
  std::size_t fail_norm = 0;           // rows with sum |a_ij|^2 > n^{1+2 eps}
  std::size_t fail_sum = 0;            // rows with |sum a_ij| > n^{1/2+eps}
  std::size_t bad_count() const noexcept;
  std::size_t n = 0;
};
RowClassification good_row_classify(const ComplexMatrix& n_mat, double epsilon);

/// Distance to the delta1-sparse vectors: l2 norm of all but the delta1
/// largest-magnitude coordinates.
double compressible_distance(std::span<const cplx> x, std::size_t delta1);
bool is_compressible(std::span<const cplx> x, std::size_t delta1, double delta2);

/// Smallest j with rho[j+1] <= factor * rho[j]. PreconditionError when no
/// such j exists, which the guarantee factor^{len-1} >= rho_last / rho_first
/// rules out.
std::size_t pigeonhole_scale(std::span<const double> rho, double factor);

enum class RichPoor { rich, poor, undecided };
std::string to_string(RichPoor c);

struct RichPoorOptions {
  double c_dioph = 1.0;               // f(beta) = beta / (200 C_dioph)
  std::optional<double> f_beta;       // overrides f(beta)
  std::optional<std::size_t> j_max;   // overrides J(beta, n) = ceil(100 log(1/beta) / log n)
  bool compute_scales = true;
};

struct RichPoorReport {
  double beta = 0.0, eta = 0.0, s_beta = 0.0, radius = 0.0;
  RichPoor classification = RichPoor::undecided;
  bool boundary = false;  // beta >= 1: rho <= 1 <= beta, poor without sampling
  LevyEstimate lcf;
  double f_beta = 0.0;
  std::size_t j_max = 0;
  std::vector<double> scale_radii;
  std::vector<double> scale_rhos;
  std::optional<std::size_t> scale_index;  // j
  std::optional<int> level_index;          // l with rho_j in (2^{-l-1}, 2^{-l}]
};

/// Classifies a unit vector by the G_eps-conditioned LCF at radius
/// 2 eta S(beta) sqrt(n), S(beta) = |M| + n / sqrt(beta): poor iff
/// estimate + ci <= beta, rich iff estimate - ci > beta.
RichPoorReport rich_poor_classify(std::span<const cplx> v, double m_norm, double beta, double eta,
                                  const NoiseDistribution& dist, double epsilon, std::size_t trials,
                                  const RandomSource& src, const RichPoorOptions& opts = {});

}  // namespace anticonc
