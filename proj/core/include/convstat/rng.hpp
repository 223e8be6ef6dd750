#ifndef CONVSTAT_RNG_HPP_
#define CONVSTAT_RNG_HPP_

#include <cstdint>

namespace convstat {

/// SplitMix64 finalizer; a bijection on 64-bit words with good avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/**
 * Counter-based stream keyed by (seed, replicate, variable).
 *
 * Draw j of a stream is a pure function of the key and j, so replicates can
 * be generated in any order or on any thread with identical results.
 */
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t replicate, std::uint64_t variable) noexcept
      : key_(mix64(mix64(mix64(seed) ^ replicate) ^ (variable * 0xd1b54a32d192ed03ULL))) {}

  std::uint64_t next_u64() noexcept { return mix64(key_ ^ mix64(counter_++)); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace convstat

#endif  // CONVSTAT_RNG_HPP_
