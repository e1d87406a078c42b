#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace anticonc {

using cplx = std::complex<double>;
using ComplexVec = std::vector<cplx>;

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Element of Z + iZ.
struct GaussInt {
  std::int64_t re = 0;
  std::int64_t im = 0;
  friend bool operator==(const GaussInt&, const GaussInt&) = default;
  cplx value() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};
using GaussianIntVector = std::vector<GaussInt>;

/// Nearest Gaussian integer; ties round half away from zero on Re and Im.
GaussInt nearest_gaussian_int(cplx z);

double norm2(std::span<const cplx> v);
double norm_inf(std::span<const cplx> v);
bool all_finite(std::span<const cplx> v);
bool is_real_vector(std::span<const cplx> v);

/// Parses "1,2+1i,-0.5-2i" (also accepts "re+im" without the trailing i).
ComplexVec parse_complex_list(const std::string& text);
cplx parse_complex(const std::string& text);
std::string format_complex(cplx z);

/// Parses "0.25", "1/4", "-3" into an exact rational. Decimal inputs are
/// converted digit-by-digit, so "0.1" becomes 1/10.
Rational parse_rational(const std::string& text);
double to_double(const Rational& q);
std::string to_string(const Rational& q);

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<cplx> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const cplx> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  double frobenius_norm() const;
  ComplexMatrix adjoint() const;
  ComplexVec apply(std::span<const cplx> x) const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);
  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

}  // namespace anticonc
