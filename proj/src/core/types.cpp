#include "anticonc/core/types.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "anticonc/core/errors.hpp"

namespace anticonc {

GaussInt nearest_gaussian_int(cplx z) {
  return {static_cast<std::int64_t>(std::round(z.real())), static_cast<std::int64_t>(std::round(z.imag()))};
}

double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

double norm_inf(std::span<const cplx> v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

bool all_finite(std::span<const cplx> v) {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

bool is_real_vector(std::span<const cplx> v) {
  for (const auto& z : v)
    if (z.imag() != 0.0) return false;
  return true;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& s, const std::string& whole) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw PreconditionError("cannot parse number '" + whole + "'");
  }
  if (used != s.size()) throw PreconditionError("cannot parse number '" + whole + "'");
  return value;
}

}  // namespace

cplx parse_complex(const std::string& raw) {
  std::string text = trim(raw);
  if (text.empty()) throw PreconditionError("empty complex literal");
  const bool has_i = text.back() == 'i' || text.back() == 'j';
  // split at the last sign that is not leading and not an exponent sign
  std::size_t split = std::string::npos;
  for (std::size_t k = text.size(); k-- > 1;) {
    if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) {
    if (has_i) return {0.0, parse_real(text.substr(0, text.size() - 1), raw)};
    return {parse_real(text, raw), 0.0};
  }
  const std::string re = text.substr(0, split);
  std::string im = text.substr(split);
  if (has_i) im.pop_back();
  if (im == "+" || im == "-") im += "1";
  return {parse_real(re, raw), parse_real(im, raw)};
}

ComplexVec parse_complex_list(const std::string& text) {
  ComplexVec out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_complex(item));
  }
  return out;
}

std::string format_complex(cplx z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

Rational parse_rational(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw PreconditionError("empty rational literal");
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const Rational num = parse_rational(text.substr(0, slash));
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw PreconditionError("zero denominator in '" + raw + "'");
    return num / den;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }
  BigInt num = 0;
  BigInt den = 1;
  bool seen_dot = false;
  bool seen_digit = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      if (seen_dot) den *= 10;
      seen_digit = true;
    } else if ((c == 'e' || c == 'E') && seen_digit) {
      int exp = 0;
      const auto* first = text.data() + pos + 1;
      const auto* last = text.data() + text.size();
      if (first != last && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, exp);
      if (ec != std::errc() || ptr != last) throw PreconditionError("bad exponent in '" + raw + "'");
      BigInt p10 = boost::multiprecision::pow(BigInt(10), std::abs(exp));
      if (exp >= 0) num *= p10; else den *= p10;
      break;
    } else {
      throw PreconditionError("cannot parse rational '" + raw + "'");
    }
  }
  if (!seen_digit) throw PreconditionError("cannot parse rational '" + raw + "'");
  Rational q(num, den);
  return negative ? Rational(-q) : q;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

double ComplexMatrix::frobenius_norm() const { return norm2(data_); }

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
  return t;
}

ComplexVec ComplexMatrix::apply(std::span<const cplx> x) const {
  require(x.size() == cols_, "matrix-vector dimension mismatch");
  ComplexVec y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "matrix sum dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.cols() == b.rows(), "matrix product dimension mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

}  // namespace anticonc
