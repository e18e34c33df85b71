#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string_view>
#include <vector>

namespace damt {

// All randomness in the toolkit flows through SplitMix64 streams derived from
// (global seed, operation label, item index).  SplitMix64 is a public-domain
// 64-bit generator with an exactly specified update, so streams are
// reproducible across platforms and compilers; deriving one stream per item
// makes results independent of thread scheduling.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer (also used as the mixing function for stream
// derivation).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform integer in [0, bound) via power-of-two mask rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t v;
    do {
      v = next_u64() & mask;
    } while (v >= bound);
    return v;
  }

  // Knuth's product method; adequate for the small lambdas used here.
  std::uint32_t next_poisson(double lambda) {
    const double limit = std::exp(-lambda);
    std::uint32_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= next_double();
    } while (p > limit);
    return k - 1;
  }

 private:
  std::uint64_t state_;
};

// Stream for (seed, label, index).  Every seeded operation names its label;
// per-item operations pass the item index so corpus-level drivers can hand
// each item an independent stream.
inline RngStream derive_stream(std::uint64_t seed, std::string_view label,
                               std::uint64_t index = 0) {
  std::uint64_t s = mix64(seed ^ fnv1a64(label));
  s = mix64(s ^ (kGolden * (index + 1)));
  return RngStream(s);
}

// Selection sampling (Knuth's Algorithm S): exactly k indices out of
// [0, n), strictly increasing, each k-subset equally likely.
inline std::vector<std::size_t> sample_indices_ordered(std::size_t n,
                                                       std::size_t k,
                                                       RngStream& stream) {
  std::vector<std::size_t> picked;
  picked.reserve(k);
  std::size_t needed = k;
  for (std::size_t i = 0; i < n && needed > 0; ++i) {
    if (stream.next_double() * static_cast<double>(n - i) <
        static_cast<double>(needed)) {
      picked.push_back(i);
      --needed;
    }
  }
  return picked;
}

template <typename T>
void shuffle(std::vector<T>& v, RngStream& stream) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(stream.next_below(i));
    std::swap(v[i - 1], v[j]);
  }
}

inline std::vector<std::size_t> random_permutation(std::size_t n,
                                                   RngStream& stream) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  shuffle(perm, stream);
  return perm;
}

}  // namespace damt
