#pragma once

#include <array>
#include <cstdint>

namespace vdcs {

// splitmix64 finalizer; used for seed expansion and substream key derivation.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// One block of the Philox4x64-10 counter-based generator (Salmon et al.).
// 128-bit key, 256-bit counter, 4 x 64-bit output per block.
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 2>& key,
                                        const std::array<std::uint64_t, 4>& counter);

// Deterministic random stream with O(1) seeking semantics: draw i is lane
// i%4 of the Philox block with counter (i/4, 0, 0, 0). Identical (key,
// counter) prefixes yield identical draw sequences on every platform.
//
// Substreams are derived by mixing tags into the key, so any number of
// workers can draw from disjoint streams in any order.
class RngStream {
 public:
  RngStream() = default;

  static RngStream from_seed(std::uint64_t seed);

  // Independent stream addressed by (a, b) under this stream's key.
  RngStream substream(std::uint64_t a, std::uint64_t b = 0) const;

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution: (u64 >> 11) * 2^-53.
  double uniform01();

  // Uniform on [lo, hi): lo + (hi - lo) * uniform01().
  double uniform(double lo, double hi);

  // Uniform on {0, ..., n-1}; n must be positive.
  std::uint64_t uniform_int(std::uint64_t n);

  // Standard normal via the AS 241 inverse CDF applied to a centered
  // uniform ((u64 >> 11) + 0.5) * 2^-53; exactly one u64 per draw.
  double normal();

  std::uint64_t counter() const { return counter_; }
  const std::array<std::uint64_t, 2>& key() const { return key_; }

 private:
  std::array<std::uint64_t, 2> key_{0, 0};
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 4> block_{};
  std::uint64_t cached_block_ = ~0ULL;
};

// Inverse standard normal CDF (Wichura's algorithm AS 241, PPND16).
// Requires p in (0, 1).
double inverse_normal_cdf(double p);

}  // namespace vdcs
