#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace anticonc {

constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256++ (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Xoshiro256pp(std::uint64_t seed = 0) noexcept {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  constexpr result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Standard normal via Box-Muller; both deviates of a pair are consumed
  /// together so the stream position never depends on cached state.
  std::array<double, 2> normal_pair() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    return {rad * std::cos(ang), rad * std::sin(ang)};
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> s_{};
};

/// Counter-based seeding: the engine for trial t depends only on
/// (seed, stream, t), never on how trials are sharded across threads.
class RandomSource {
 public:
  constexpr RandomSource() = default;
  constexpr explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {}

  constexpr std::uint64_t seed() const noexcept { return seed_; }
  constexpr std::uint64_t stream() const noexcept { return stream_; }

  Xoshiro256pp engine(std::uint64_t trial) const noexcept {
    std::uint64_t st = seed_;
    std::uint64_t key = splitmix64(st);
    st = key ^ (stream_ * 0xd1b54a32d192ed03ULL);
    key = splitmix64(st);
    st = key ^ (trial * 0xabc98388fb8fac03ULL);
    return Xoshiro256pp(splitmix64(st));
  }

  /// Independent child stream, e.g. one per radius or per sub-experiment.
  constexpr RandomSource derive(std::uint64_t id) const noexcept {
    std::uint64_t st = stream_ ^ (id + 0x632be59bd9b4e019ULL);
    return RandomSource(seed_, splitmix64(st));
  }

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
};

}  // namespace anticonc
