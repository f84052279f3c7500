#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace ucbvi {

// Generator + mapping identifier recorded in experiment metadata. Results are
// reproducible across platforms because mt19937_64 is pinned by the standard
// and all real-valued draws go through the explicit mappings below instead of
// std::uniform_real_distribution (whose output is implementation-defined).
inline constexpr const char* kRngAlgorithmId =
    "mt19937_64 / splitmix64 stream derivation / 53-bit uniform";

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic stream seed from (master, tag, index). Tag is hashed FNV-1a
// style so distinct agent ids land on unrelated streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t index) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t s = mix64(master + 0x9e3779b97f4a7c15ULL);
  s = mix64(s ^ h);
  return mix64(s ^ (index + 0x9e3779b97f4a7c15ULL));
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Standard exponential; finite because uniform01() < 1.
  double exponential() { return -std::log1p(-uniform01()); }

  // Samples an index from a probability row. Entries must be nonnegative and
  // sum to ~1; floating point slack at the top of the cumulative sum falls
  // back to the last index with positive mass.
  int categorical(std::span<const double> probs) {
    const double u = uniform01();
    double acc = 0.0;
    int last = 0;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      if (probs[i] <= 0.0) continue;
      acc += probs[i];
      last = i;
      if (u < acc) return i;
    }
    return last;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ucbvi
