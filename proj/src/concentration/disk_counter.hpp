#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "anticonc/core/types.hpp"

namespace anticonc::detail {

/// Weighted point set answering "total weight in the closed disk of radius r
/// (+ tol) around c". Points are bucketed on a uniform grid; cells lying
/// entirely inside the disk are summed through per-row prefix sums and only
/// cells crossing the circle are scanned point by point.
template <class W>
class DiskCounter {
 public:
  DiskCounter(std::span<const cplx> pts, std::span<const W> weights, double r, double tol)
      : r_(r), reach_(r + tol) {
    const std::size_t m = pts.size();
    if (m == 0) return;
    double x0 = pts[0].real(), x1 = x0, y0 = pts[0].imag(), y1 = y0;
    for (const auto& z : pts) {
      x0 = std::min(x0, z.real());
      x1 = std::max(x1, z.real());
      y0 = std::min(y0, z.imag());
      y1 = std::max(y1, z.imag());
    }
    min_x_ = x0;
    min_y_ = y0;
    const double span_x = x1 - x0, span_y = y1 - y0;
    constexpr double kMaxCells = 1 << 20;
    h_ = r > 0.0 ? r / 8.0 : 0.0;
    const double spread = std::max({span_x, span_y, 1e-300});
    if (h_ <= 0.0) h_ = spread;
    while ((span_x / h_ + 1.0) * (span_y / h_ + 1.0) > kMaxCells) h_ *= 2.0;
    // a handful of cells is enough when the points are few
    if (m < 64) h_ = std::max(h_, spread);
    nx_ = static_cast<std::size_t>(std::floor(span_x / h_)) + 1;
    ny_ = static_cast<std::size_t>(std::floor(span_y / h_)) + 1;

    std::vector<std::size_t> cell(m);
    for (std::size_t k = 0; k < m; ++k) cell[k] = cell_of(pts[k]);
    start_.assign(nx_ * ny_ + 1, 0);
    for (auto c : cell) ++start_[c + 1];
    std::partial_sum(start_.begin(), start_.end(), start_.begin());
    pts_.resize(m);
    w_.resize(m);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t at = fill[cell[k]]++;
      pts_[at] = pts[k];
      w_[at] = weights[k];
    }
    row_prefix_.assign(ny_ * (nx_ + 1), W{});
    for (std::size_t iy = 0; iy < ny_; ++iy) {
      W acc{};
      for (std::size_t ix = 0; ix < nx_; ++ix) {
        for (std::size_t k = start_[iy * nx_ + ix]; k < start_[iy * nx_ + ix + 1]; ++k) acc += w_[k];
        row_prefix_[iy * (nx_ + 1) + ix + 1] = acc;
      }
    }
  }

  W count(cplx c) const {
    W total{};
    if (pts_.empty()) return total;
    const double cx = c.real(), cy = c.imag();
    const long iy0 = clamp_y(std::floor((cy - reach_ - min_y_) / h_));
    const long iy1 = clamp_y(std::floor((cy + reach_ - min_y_) / h_));
    const long ix0 = clamp_x(std::floor((cx - reach_ - min_x_) / h_));
    const long ix1 = clamp_x(std::floor((cx + reach_ - min_x_) / h_));
    if (cy + reach_ < min_y_ || cx + reach_ < min_x_) return total;
    if (cy - reach_ > min_y_ + static_cast<double>(ny_) * h_) return total;
    if (cx - reach_ > min_x_ + static_cast<double>(nx_) * h_) return total;
    const double r2 = reach_ * reach_;
    for (long iy = iy0; iy <= iy1; ++iy) {
      const double ylo = min_y_ + static_cast<double>(iy) * h_;
      const double dy_far = std::max(std::abs(ylo - cy), std::abs(ylo + h_ - cy));
      long fx0 = ix1 + 1, fx1 = ix1;  // empty full range by default
      if (dy_far <= r_) {
        const double wx = std::sqrt(r_ * r_ - dy_far * dy_far);
        fx0 = std::max(ix0, static_cast<long>(std::ceil((cx - wx - min_x_) / h_)));
        fx1 = std::min(ix1, static_cast<long>(std::floor((cx + wx - min_x_) / h_)) - 1);
        if (fx0 > fx1) {
          fx0 = ix1 + 1;
          fx1 = ix1;
        }
      }
      const std::size_t row = static_cast<std::size_t>(iy);
      if (fx0 <= fx1)
        total += row_prefix_[row * (nx_ + 1) + static_cast<std::size_t>(fx1) + 1] -
                 row_prefix_[row * (nx_ + 1) + static_cast<std::size_t>(fx0)];
      auto scan = [&](long a, long b) {
        for (long ix = a; ix <= b; ++ix) {
          const std::size_t cell = row * nx_ + static_cast<std::size_t>(ix);
          for (std::size_t k = start_[cell]; k < start_[cell + 1]; ++k)
            if (std::norm(pts_[k] - c) <= r2) total += w_[k];
        }
      };
      if (fx0 <= fx1) {
        scan(ix0, fx0 - 1);
        scan(fx1 + 1, ix1);
      } else {
        scan(ix0, ix1);
      }
    }
    return total;
  }

 private:
  std::size_t cell_of(cplx z) const {
    const auto ix = std::min(nx_ - 1, static_cast<std::size_t>(std::floor((z.real() - min_x_) / h_)));
    const auto iy = std::min(ny_ - 1, static_cast<std::size_t>(std::floor((z.imag() - min_y_) / h_)));
    return iy * nx_ + ix;
  }
  long clamp_x(double v) const { return static_cast<long>(std::clamp(v, 0.0, static_cast<double>(nx_ - 1))); }
  long clamp_y(double v) const { return static_cast<long>(std::clamp(v, 0.0, static_cast<double>(ny_ - 1))); }

  double r_;
  double reach_;
  double min_x_ = 0.0, min_y_ = 0.0, h_ = 1.0;
  std::size_t nx_ = 0, ny_ = 0;
  std::vector<std::size_t> start_;
  std::vector<cplx> pts_;
  std::vector<W> w_;
  std::vector<W> row_prefix_;
};

}  // namespace anticonc::detail
