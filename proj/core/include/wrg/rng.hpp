#pragma once

#include <cmath>
#include <cstdint>

namespace wrg {

// Counter-based random stream: output i is mix64(key + i * GAMMA), so a
// stream is fully determined by its key and position. Substreams derive
// their key by hashing (seed, stream_id); replica r of a seeded run sees
// the same sequence no matter how work is scheduled across threads.
class RngStream {
public:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  static RngStream from_seed(std::uint64_t seed, std::uint64_t stream_id = 0) {
    return RngStream(mix64(seed + kGamma) ^ mix64(stream_id * kGamma + 0xD6E8FEB86659FD93ull));
  }

  std::uint64_t next_u64() { return mix64(key_ + (ctr_++) * kGamma); }

  // uniform in [0,1), 53-bit resolution
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in (0,1)
  double next_unit_open() {
    double u;
    do {
      u = next_unit();
    } while (u == 0.0);
    return u;
  }

  // unbiased uniform integer in [0, bound)
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = -bound % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      const unsigned __int128 m = static_cast<unsigned __int128>(r) * bound;
      if (static_cast<std::uint64_t>(m) >= threshold)
        return static_cast<std::uint64_t>(m >> 64);
    }
  }

  // Box-Muller; draws two uniforms per normal
  double next_normal() {
    const double u1 = next_unit_open();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return ctr_; }

private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

}  // namespace wrg
