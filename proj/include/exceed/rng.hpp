#pragma once

// Counter-based random streams. A (seed, purpose, stream_id) triple selects an
// independent Philox4x32-10 sequence, so replication r draws the same numbers
// no matter which worker runs it or in what order.

#include <array>

#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace exceed {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter encrypt(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

  /// Encrypts kLanes counters at once; equal to kLanes calls of encrypt().
  static constexpr int kLanes = 4;
  static constexpr void encrypt_lanes(std::array<Counter, kLanes>& ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      for (auto& c : ctr) {
        const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
        c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      }
    }
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Domain tags keep the Gaussian, scale and auxiliary streams of one
/// replication independent of each other.
enum class StreamPurpose : std::uint64_t {
  kGaussianPair = 1,
  kIidGaussian = 2,
  kScales = 3,
  kAuxiliary = 4,
};

/// Derives the i-th seed of a multi-seed experiment from its master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return index == 0 ? master_seed : splitmix64(master_seed ^ splitmix64(index));
}

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t stream_id) noexcept {
    const std::uint64_t k = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(purpose)));
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    stream_lo_ = static_cast<std::uint32_t>(stream_id);
    stream_hi_ = static_cast<std::uint32_t>(stream_id >> 32);
  }

  /// Next 64 random bits.
  std::uint64_t next_u64() noexcept {
    if (lane_ == kWords / 2) refill();
    const std::uint64_t v = (std::uint64_t{buffer_[2 * lane_ + 1]} << 32) | buffer_[2 * lane_];
    ++lane_;
    return v;
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal (Boost ziggurat driven by this stream).
  double normal() noexcept {
    Bits bits{this};
    return normal_(bits);
  }

  void fill_normal(std::span<double> out) noexcept {
    Bits bits{this};
    for (double& v : out) v = normal_(bits);
  }

 private:
  struct Bits {
    RandomStream* stream;
    using result_type = std::uint64_t;
    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept { return stream->next_u64(); }
  };

  void refill() noexcept {
    std::array<Philox4x32::Counter, Philox4x32::kLanes> ctr;
    for (int i = 0; i < Philox4x32::kLanes; ++i) {
      const std::uint64_t b = block_ + static_cast<std::uint64_t>(i);
      ctr[i] = {static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32), stream_lo_, stream_hi_};
    }
    Philox4x32::encrypt_lanes(ctr, key_);
    for (int i = 0; i < Philox4x32::kLanes; ++i) {
      for (int w = 0; w < 4; ++w) buffer_[4 * i + w] = ctr[i][w];
    }
    block_ += Philox4x32::kLanes;
    lane_ = 0;
  }

  Philox4x32::Key key_{};
  std::uint32_t stream_lo_ = 0;
  std::uint32_t stream_hi_ = 0;
  std::uint64_t block_ = 0;
  static constexpr int kWords = 4 * Philox4x32::kLanes;
  std::array<std::uint32_t, kWords> buffer_{};
  int lane_ = kWords / 2;
  boost::random::normal_distribution<double> normal_;
};

}  // namespace exceed
