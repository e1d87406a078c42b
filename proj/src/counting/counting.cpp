#include "anticonc/counting/counting.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "anticonc/concentration/levy.hpp"
#include "anticonc/core/errors.hpp"
#include "anticonc/core/parallel.hpp"

namespace anticonc {
namespace {

std::uint32_t reduce(std::int64_t x, std::uint32_t p) {
  const std::int64_t r = x % static_cast<std::int64_t>(p);
  return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

void require_odd_prime(std::uint64_t p) {
  if (p < 3 || !is_prime(p)) throw PreconditionError("p must be an odd prime, got " + std::to_string(p));
}

BigInt pow_big(BigInt base, unsigned e) {
  BigInt r = 1;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

Rational pow_rat(const Rational& base, int e) {
  Rational r = 1;
  const Rational b = e >= 0 ? base : Rational(1) / base;
  for (int i = 0; i < std::abs(e); ++i) r *= b;
  return r;
}

// |x|_{R/Z} * p for a residue x, as an integer.
std::uint64_t circ(std::uint64_t x, std::uint64_t p) { return std::min(x, p - x); }

}  // namespace

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

FpVector::FpVector(std::uint32_t p, const std::vector<std::pair<std::int64_t, std::int64_t>>& entries)
    : p_(p) {
  require_odd_prime(p);
  e_.reserve(entries.size());
  for (const auto& [re, im] : entries) e_.push_back({reduce(re, p), reduce(im, p)});
}

FpVector::FpVector(std::uint32_t p, std::vector<FpElem> entries) : p_(p), e_(std::move(entries)) {
  require_odd_prime(p);
  for (auto& x : e_) {
    x.re %= p;
    x.im %= p;
  }
}

FpVector FpVector::restrict(std::uint64_t mask) const {
  std::vector<FpElem> out;
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (mask >> i & 1) out.push_back(e_[i]);
  return FpVector(p_, std::move(out));
}

FpVector FpVector::scaled(FpElem c) const {
  const std::uint64_t p = p_;
  std::vector<FpElem> out;
  out.reserve(e_.size());
  for (const auto& x : e_) {
    const std::uint64_t re = (x.re * std::uint64_t{c.re} + (p - x.im) * std::uint64_t{c.im}) % p;
    const std::uint64_t im = (x.re * std::uint64_t{c.im} + x.im * std::uint64_t{c.re}) % p;
    out.push_back({static_cast<std::uint32_t>(re), static_cast<std::uint32_t>(im)});
  }
  return FpVector(p_, std::move(out));
}

std::string FpVector::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (i) out << ',';
    out << e_[i].re << '+' << e_[i].im << 'i';
  }
  return out.str();
}

FpVector FpVector::parse(std::uint32_t p, const std::string& text) {
  std::vector<std::pair<std::int64_t, std::int64_t>> entries;
  for (const cplx z : parse_complex_list(text)) {
    if (z.real() != std::round(z.real()) || z.imag() != std::round(z.imag()))
      throw PreconditionError("F_p vector entries must be Gaussian integers: " + format_complex(z));
    entries.emplace_back(static_cast<std::int64_t>(z.real()), static_cast<std::int64_t>(z.imag()));
  }
  return FpVector(p, entries);
}

FpVector phi_p(const GaussianIntVector& v, std::uint32_t p) {
  std::vector<std::pair<std::int64_t, std::int64_t>> entries;
  entries.reserve(v.size());
  for (const auto& z : v) entries.emplace_back(z.re, z.im);
  return FpVector(p, entries);
}

unsigned distinct_threshold(unsigned k, const Rational& alpha) {
  require(alpha >= -1 && alpha <= 1, "alpha must lie in [-1, 1]");
  const Rational q = (1 + alpha) * k;
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  return static_cast<unsigned>((num + den - 1) / den);
}

BigInt rk_alpha(const FpVector& v, unsigned k, const Rational& alpha, double budget) {
  require(k >= 1, "rk_alpha: k must be >= 1");
  const unsigned need = distinct_threshold(k, alpha);
  const std::size_t n = v.size();
  require(n <= 63, "rk_alpha: at most 63 coordinates");
  if (n == 0) return 0;
  const double work = std::pow(2.0 * static_cast<double>(n), 2.0 * k);
  if (work > budget) {
    std::ostringstream msg;
    msg << "rk_alpha: (2n)^{2k} = " << work << " exceeds the enumeration budget " << budget;
    throw CapabilityError(msg.str());
  }
  const std::uint64_t p = v.p();
  const std::uint64_t choices = 2 * n;

  // Half sequences of length k: (sum code, index mask), then aggregated.
  struct Half {
    std::uint64_t sum, mask, count;
  };
  std::uint64_t half_count = 1;
  for (unsigned i = 0; i < k; ++i) half_count *= choices;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw(half_count);
  parallel_for(half_count, [&](std::size_t code) {
    std::uint64_t re = 0, im = 0, mask = 0, c = code;
    for (unsigned pos = 0; pos < k; ++pos, c /= choices) {
      const std::size_t idx = (c % choices) / 2;
      const bool neg = (c % choices) % 2 == 1;
      const FpElem& x = v[idx];
      re += neg ? p - x.re : x.re;
      im += neg ? p - x.im : x.im;
      mask |= std::uint64_t{1} << idx;
    }
    raw[code] = {(re % p) * p + im % p, need <= 1 ? 0 : mask};
  });
  std::sort(raw.begin(), raw.end());
  std::vector<Half> halves;
  for (const auto& [s, m] : raw) {
    if (!halves.empty() && halves.back().sum == s && halves.back().mask == m)
      ++halves.back().count;
    else
      halves.push_back({s, m, 1});
  }
  raw.clear();
  raw.shrink_to_fit();

  auto group = [&](std::uint64_t s) {
    auto lo = std::lower_bound(halves.begin(), halves.end(), s,
                               [](const Half& h, std::uint64_t key) { return h.sum < key; });
    auto hi = lo;
    while (hi != halves.end() && hi->sum == s) ++hi;
    return std::pair{lo, hi};
  };
  unsigned __int128 total = 0;
  for (auto it = halves.begin(); it != halves.end();) {
    const std::uint64_t s = it->sum;
    auto end1 = it;
    while (end1 != halves.end() && end1->sum == s) ++end1;
    const std::uint64_t re = s / p, im = s % p;
    const auto [lo, hi] = group(((p - re) % p) * p + (p - im) % p);
    for (auto a = it; a != end1; ++a)
      for (auto b = lo; b != hi; ++b)
        if (need <= 1 || static_cast<unsigned>(std::popcount(a->mask | b->mask)) >= need)
          total += static_cast<unsigned __int128>(a->count) * b->count;
    it = end1;
  }
  BigInt out = static_cast<std::uint64_t>(total >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(total);
  return out;
}

Lemma16Report lemma16_check(const FpVector& v, unsigned k, const Rational& alpha) {
  Lemma16Report rep;
  rep.lhs = rk_alpha(v, k, Rational(-1));
  rep.r_alpha = rk_alpha(v, k, alpha);
  const long double a = to_double(alpha);
  const long double n = static_cast<long double>(v.size());
  const long double term =
      std::pow(40.0L * std::pow(static_cast<long double>(k), 1 - a) * std::pow(n, 1 + a), k);
  // Integral inputs (alpha in {-1, 0, 1}) give an exact long double power.
  rep.combinatorial = BigInt(static_cast<double>(std::ceil(term)));
  rep.rhs = rep.r_alpha + rep.combinatorial;
  rep.pass = rep.lhs <= rep.rhs;
  return rep;
}

bool b_set_membership(const FpVector& v, unsigned k, unsigned s, const Rational& t,
                      const Rational& alpha) {
  const std::size_t n = v.size();
  require(n <= 24, "b_set_membership: subset enumeration limited to n <= 24");
  const BigInt p = v.p();
  const BigInt tn = boost::multiprecision::numerator(t);
  const BigInt td = boost::multiprecision::denominator(t);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const auto size = static_cast<unsigned>(std::popcount(mask));
    if (size < s) continue;
    const BigInt r = rk_alpha(v.restrict(mask), k, alpha);
    // R >= t 4^k |I|^{2k} / p, cleared of denominators.
    if (r * p * td < tn * pow_big(4, k) * pow_big(size, 2 * k)) return false;
  }
  return true;
}

CountingReport counting_lemma_verify(unsigned n, std::uint32_t p, unsigned k, unsigned s,
                                     const Rational& t, const Rational& alpha) {
  require_odd_prime(p);
  require(n >= 1 && s >= 1 && s <= n, "counting_lemma_verify: need 1 <= s <= n");
  require(alpha > 0 && alpha <= 1, "counting_lemma_verify: alpha must lie in (0, 1]");
  require(t > 0, "counting_lemma_verify: t must be > 0");
  const double space = std::pow(static_cast<double>(p), 2.0 * n);
  if (space > 1e6)
    throw PreconditionError("counting_lemma_verify: p^{2n} = " + std::to_string(space) +
                            " exceeds the exhaustive regime (1e6)");
  const auto total = static_cast<std::size_t>(space);
  const std::uint64_t pp = std::uint64_t{p} * p;
  std::vector<char> member(total);
  parallel_for(total, [&](std::size_t code) {
    std::vector<FpElem> e(n);
    std::uint64_t c = code;
    for (auto& x : e) {
      const std::uint64_t r = c % pp;
      c /= pp;
      x = {static_cast<std::uint32_t>(r / p), static_cast<std::uint32_t>(r % p)};
    }
    member[code] = b_set_membership(FpVector(p, std::move(e)), k, s, t, alpha);
  });
  CountingReport rep;
  rep.n = n;
  rep.k = k;
  rep.s = s;
  rep.p = p;
  rep.t = t;
  rep.alpha = alpha;
  rep.card = static_cast<std::uint64_t>(std::count(member.begin(), member.end(), 1));
  rep.space = pow_big(p, 2 * n);
  rep.bound = pow_rat(alpha * t, static_cast<int>(s) - static_cast<int>(n)) * Rational(pow_big(p, n + s));
  rep.pass = Rational(rep.card) <= rep.bound;
  rep.vacuous = rep.bound >= Rational(rep.space);
  return rep;
}

CauchyDavenportReport cauchy_davenport_check(std::span<const FpElem> a, std::span<const FpElem> b,
                                             std::uint32_t p) {
  require_odd_prime(p);
  if (a.empty() || b.empty()) throw PreconditionError("cauchy_davenport_check: sets must be nonempty");
  auto dedup = [p](std::span<const FpElem> s) {
    std::vector<char> seen(std::size_t{p} * p);
    std::vector<FpElem> out;
    for (const auto& x : s) {
      const std::size_t c = std::size_t{x.re % p} * p + x.im % p;
      if (!seen[c]) {
        seen[c] = 1;
        out.push_back({x.re % p, x.im % p});
      }
    }
    return out;
  };
  const auto da = dedup(a), db = dedup(b);
  std::vector<char> sum(std::size_t{p} * p);
  for (const auto& x : da)
    for (const auto& y : db) sum[std::size_t{(x.re + y.re) % p} * p + (x.im + y.im) % p] = 1;
  CauchyDavenportReport rep;
  rep.lhs = std::count(sum.begin(), sum.end(), 1);
  rep.rhs = std::min<std::int64_t>(std::int64_t{p} * p,
                                   static_cast<std::int64_t>(da.size() + db.size()) - p);
  rep.pass = rep.lhs >= rep.rhs;
  return rep;
}

std::vector<FpElem> p_prime_set(const FpVector& v, std::uint64_t index_mask, const Rational& m,
                                const Rational& c_level) {
  const std::uint64_t p = v.p();
  const Rational level = c_level * m * Rational(p * p);
  std::vector<FpElem> out;
  if (level < 0) return out;
  const BigInt cap = boost::multiprecision::numerator(level) / boost::multiprecision::denominator(level);
  for (std::uint64_t r1 = 0; r1 < p; ++r1)
    for (std::uint64_t r2 = 0; r2 < p; ++r2) {
      BigInt acc = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(index_mask >> i & 1)) continue;
        // Re{(a + ib)(r1 + i r2)} = a r1 - b r2.
        const std::uint64_t x = (v[i].re * r1 + (p - v[i].im) * r2) % p;
        const std::uint64_t d = circ(x, p);
        acc += d * d;
      }
      if (acc <= cap) out.push_back({static_cast<std::uint32_t>(r1), static_cast<std::uint32_t>(r2)});
    }
  return out;
}

SumsetIterationReport sumset_iteration_check(const FpVector& v, std::uint64_t index_mask,
                                             const Rational& m, unsigned t, const Rational& c_level) {
  require(t >= 1, "sumset_iteration_check: t must be >= 1");
  const std::uint64_t p = v.p();
  require(p * p <= 1'000'000, "sumset_iteration_check: p^2 must be <= 1e6");
  const auto base = p_prime_set(v, index_mask, m, c_level);
  const auto target = p_prime_set(v, index_mask, m * t * t, c_level);
  std::vector<char> in_target(p * p), acc(p * p);
  for (const auto& x : target) in_target[x.re * p + x.im] = 1;
  for (const auto& x : base) acc[x.re * p + x.im] = 1;
  for (unsigned step = 1; step < t; ++step) {
    std::vector<char> next(p * p);
    for (std::uint64_t c = 0; c < p * p; ++c) {
      if (!acc[c]) continue;
      for (const auto& x : base) next[((c / p + x.re) % p) * p + (c % p + x.im) % p] = 1;
    }
    acc.swap(next);
  }
  SumsetIterationReport rep;
  rep.base_size = base.size();
  rep.target_size = target.size();
  rep.sumset_size = static_cast<std::size_t>(std::count(acc.begin(), acc.end(), 1));
  rep.included = true;
  for (std::uint64_t c = 0; c < p * p; ++c)
    if (acc[c] && !in_target[c]) rep.included = false;
  const auto lower = std::min<std::int64_t>(static_cast<std::int64_t>(p * p),
                                            static_cast<std::int64_t>(t * base.size()) -
                                                static_cast<std::int64_t>(t * p));
  rep.size_consequence = base.empty() || static_cast<std::int64_t>(target.size()) >= lower;
  rep.pass = rep.included;
  return rep;
}

VRhoReport enumerate_v_rho(unsigned n, unsigned coord_bound, const NoiseDistribution& dist,
                           const Rational& rho, std::uint32_t p) {
  require_odd_prime(p);
  if (!dist.is_discrete()) throw CapabilityError("enumerate_v_rho: needs a discrete law");
  const double side = 2.0 * coord_bound + 1;
  const double box = std::pow(side, 2.0 * n);
  if (box > 1e6)
    throw CapabilityError("enumerate_v_rho: box of " + std::to_string(box) + " vectors exceeds 1e6");
  VRhoReport rep;
  rep.p = p;
  rep.box_size = static_cast<std::size_t>(box);
  if (rho > 1) return rep;
  const auto b = static_cast<std::int64_t>(coord_bound);
  const auto w = static_cast<std::uint64_t>(side);
  auto decode = [&](std::size_t code) {
    GaussianIntVector v(n);
    for (auto& z : v) {
      z.re = static_cast<std::int64_t>(code % w) - b;
      code /= w;
      z.im = static_cast<std::int64_t>(code % w) - b;
      code /= w;
    }
    return v;
  };
  const double rho_d = to_double(rho);
  std::vector<char> keep(rep.box_size);
  parallel_for(rep.box_size, [&](std::size_t code) {
    const GaussianIntVector g = decode(code);
    ComplexVec v(n);
    for (unsigned i = 0; i < n; ++i) v[i] = g[i].value();
    const LevyEstimate e = lcf_exact(dist, v, 1.0);
    keep[code] = e.exact_value ? *e.exact_value >= rho : e.value >= rho_d - 1e-12;
  });
  std::unordered_set<std::string> image;
  for (std::size_t code = 0; code < rep.box_size; ++code) {
    if (!keep[code]) continue;
    rep.members.push_back(decode(code));
    image.insert(phi_p(rep.members.back(), p).to_string());
  }
  rep.image_size = image.size();
  return rep;
}

Theorem12Report theorem12_bound(unsigned n, unsigned s, unsigned k, std::uint32_t p, double rho,
                                double c, double c_xi) {
  require(n >= 2 && s >= 1 && k >= 1, "theorem12_bound: need n >= 2, s >= 1, k >= 1");
  require(rho > 0 && rho <= 1 && c > 0, "theorem12_bound: need 0 < rho <= 1, C > 0");
  const double nd = n, sd = s, kd = k, pd = p;
  Theorem12Report rep;
  rep.log_term1 = sd * std::log(5.0 * nd * pd * pd / sd);
  rep.log_term2 = nd * (std::log(c) - std::log(rho) - 0.5 * std::log(sd / kd));
  const double hi = std::max(rep.log_term1, rep.log_term2);
  const double lo = std::min(rep.log_term1, rep.log_term2);
  rep.log_bound = hi + std::log1p(std::exp(lo - hi));
  rep.log10_bound = rep.log_bound / std::log(10.0);
  rep.k_at_least_1000_cxi = kd >= 1000.0 * c_xi;
  rep.k_at_most_sqrt_s = kd <= std::sqrt(sd);
  rep.s_at_most_n_over_log_n = sd <= nd / std::log(nd);
  rep.rho_large_enough = rho >= c * std::max(std::exp(-sd / kd), std::pow(sd, -kd / 4.0));
  rep.p_in_range = pd <= std::exp2(nd / sd) && pd >= c / rho;
  return rep;
}

}  // namespace anticonc
