#include "anticonc/matrix/singular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anticonc/core/errors.hpp"

namespace anticonc {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Householder vector v with (I - 2 v v^* / v^* v) x = alpha e_1. Returns v^* v (0: no-op).
double householder(std::vector<cplx>& x) {
  double nrm = 0.0;
  for (const cplx& c : x) nrm += std::norm(c);
  nrm = std::sqrt(nrm);
  if (nrm == 0.0) return 0.0;
  const double phase = x[0] == cplx{} ? 0.0 : std::arg(x[0]);
  x[0] += std::polar(nrm, phase);  // v = x - alpha e_1 with alpha = -e^{i phase} |x|
  double vv = 0.0;
  for (const cplx& c : x) vv += std::norm(c);
  return vv;
}

// Golub-Kahan tridiagonal of a bidiagonal with zero diagonal and
// off-diagonals d_0, e_0, d_1, ..., d_{n-1}; eigenvalues are +-sigma_i.
class GolubKahan {
 public:
  GolubKahan(const Bidiagonal& b, double scale) : n_(b.diag.size()) {
    off2_.reserve(2 * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double d = b.diag[i] / scale;
      off2_.push_back(d * d);
      if (i + 1 < n_) {
        const double e = b.super[i] / scale;
        off2_.push_back(e * e);
      }
      bound_ = std::max(bound_, b.diag[i] / scale + (i + 1 < n_ ? b.super[i] / scale : 0.0));
      if (i > 0) bound_ = std::max(bound_, b.diag[i] / scale + b.super[i - 1] / scale);
    }
    double mx = 0.0;
    for (double v : off2_) mx = std::max(mx, v);
    pivmin_ = std::numeric_limits<double>::min() * std::max(1.0, mx);
    bound_ = bound_ * (1 + 4 * kEps) + pivmin_;
  }

  // #{sigma_i < x} for x > 0, from the inertia of T - x I.
  std::size_t below(double x) const {
    std::size_t neg = 0;
    double q = -x;
    for (std::size_t i = 0;; ++i) {
      if (std::abs(q) < pivmin_) q = -pivmin_;
      if (q < 0) ++neg;
      if (i == off2_.size()) break;
      q = -x - off2_[i] / q;
    }
    return neg - n_;
  }

  double upper() const { return bound_; }

  // k-th smallest singular value (0-based); stops at relative width `tol`
  // or once the bracket is entirely below `floor`.
  double kth(std::size_t k, double tol, double floor) const {
    double lo = 0.0, hi = bound_;
    for (int it = 0; it < 2000 && hi - lo > tol * hi && hi > floor; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (below(mid) >= k + 1)
        hi = mid;
      else
        lo = mid;
    }
    return hi <= floor ? 0.0 : 0.5 * (lo + hi);
  }

 private:
  std::size_t n_;
  std::vector<double> off2_;
  double pivmin_ = 0.0;
  double bound_ = 0.0;
};

void require_square(const ComplexMatrix& m) {
  if (!m.square() || m.rows() == 0)
    throw PreconditionError("singular values need a nonempty square matrix, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  if (!all_finite(m.data())) throw PreconditionError("matrix has non-finite entries");
}

double scale_of(const Bidiagonal& b) {
  double s = 0.0;
  for (double d : b.diag) s = std::max(s, d);
  for (double e : b.super) s = std::max(s, e);
  return s;
}

}  // namespace

Bidiagonal bidiagonalize(const ComplexMatrix& m) {
  require_square(m);
  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  Bidiagonal out;
  out.diag.resize(n);
  out.super.resize(n > 0 ? n - 1 : 0);
  std::vector<cplx> v;
  for (std::size_t k = 0; k < n; ++k) {
    // Left reflection zeroes column k below the diagonal.
    v.assign(n - k, cplx{});
    for (std::size_t i = k; i < n; ++i) v[i - k] = a(i, k);
    if (const double vv = householder(v); vv > 0) {
      for (std::size_t j = k; j < n; ++j) {
        cplx w{};
        for (std::size_t i = k; i < n; ++i) w += std::conj(v[i - k]) * a(i, j);
        w *= 2.0 / vv;
        for (std::size_t i = k; i < n; ++i) a(i, j) -= w * v[i - k];
      }
    }
    out.diag[k] = std::abs(a(k, k));
    if (k + 1 >= n) break;
    // Right reflection zeroes row k beyond the superdiagonal: A <- A H with
    // H built from the conjugated row.
    v.assign(n - k - 1, cplx{});
    for (std::size_t j = k + 1; j < n; ++j) v[j - k - 1] = std::conj(a(k, j));
    if (const double vv = householder(v); vv > 0) {
      for (std::size_t i = k; i < n; ++i) {
        cplx w{};
        for (std::size_t j = k + 1; j < n; ++j) w += a(i, j) * v[j - k - 1];
        w *= 2.0 / vv;
        for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= w * std::conj(v[j - k - 1]);
      }
    }
    out.super[k] = std::abs(a(k, k + 1));
  }
  return out;
}

double smallest_singular_value(const ComplexMatrix& m, double tol) {
  require(tol > 0 && tol < 1, "smallest_singular_value: tol must lie in (0, 1)");
  const Bidiagonal b = bidiagonalize(m);
  const double scale = scale_of(b);
  if (scale == 0.0) return 0.0;
  const double floor = 4.0 * static_cast<double>(m.rows()) * kEps * m.frobenius_norm() / scale;
  return GolubKahan(b, scale).kth(0, tol, floor) * scale;
}

double operator_norm(const ComplexMatrix& m, double tol) {
  require(tol > 0 && tol < 1, "operator_norm: tol must lie in (0, 1)");
  const Bidiagonal b = bidiagonalize(m);
  const double scale = scale_of(b);
  if (scale == 0.0) return 0.0;
  return GolubKahan(b, scale).kth(m.rows() - 1, tol, 0.0) * scale;
}

std::vector<double> singular_values(const ComplexMatrix& m, double tol) {
  const Bidiagonal b = bidiagonalize(m);
  const double scale = scale_of(b);
  std::vector<double> out(m.rows(), 0.0);
  if (scale == 0.0) return out;
  const GolubKahan gk(b, scale);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = gk.kth(k, tol, 0.0) * scale;
  return out;
}

}  // namespace anticonc
