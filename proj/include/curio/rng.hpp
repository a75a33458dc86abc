#pragma once

#include <cmath>
#include <cstdint>

// Counter-based random streams.
//
// Every stream is a pure function of (key, counter), where the key is derived
// by hash-chaining a user seed with stream tags and indices.  Two properties
// follow directly:
//   * a stream for (seed, tag, trial, particle) can be opened anywhere, in any
//     thread, and always yields the same sequence;
//   * results never depend on scheduling order, which keeps parallel and
//     serial runs bit-identical.
//
// The generator is the splitmix64 output function applied to key + n*golden.

namespace curio::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Hash-chain one value into a key.  Asymmetric so (a,b) != (b,a).
inline constexpr std::uint64_t chain(std::uint64_t key, std::uint64_t v) {
  return mix64(key ^ (mix64(v) + (key << 6) + (key >> 2)));
}

// Stream identifiers.  Values are part of the determinism contract: changing
// them changes every artifact byte.
enum class Tag : std::uint64_t {
  Policy = 1,    // action sampling in the simulator
  Env = 2,       // outcome sampling / environment walks
  Eda = 3,       // synthetic EDA generator
  Init = 4,      // particle initialization
  Drift = 5,     // per-particle prediction noise
  Resample = 6,  // systematic resampling offset
  Oracle = 7,    // Monte Carlo oracles in tests
  Misc = 8,
};

inline constexpr std::uint64_t derive_key(std::uint64_t seed, Tag tag,
                                          std::uint64_t a = 0,
                                          std::uint64_t b = 0) {
  std::uint64_t k = mix64(seed);
  k = chain(k, static_cast<std::uint64_t>(tag));
  k = chain(k, a);
  k = chain(k, b);
  return k;
}

class Stream {
 public:
  explicit constexpr Stream(std::uint64_t key) : key_(key) {}
  Stream(std::uint64_t seed, Tag tag, std::uint64_t a = 0, std::uint64_t b = 0)
      : key_(derive_key(seed, tag, a, b)) {}

  constexpr std::uint64_t next_u64() { return mix64(key_ + kGolden * n_++); }

  // Uniform on (0,1]: never returns 0, so log() downstream is safe.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Uniform on [0,1), as required by the systematic resampler.
  double next_uniform_co() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller, cosine branch only.  Always consumes
  // exactly two uniforms and never caches, so the draw count per call is
  // fixed — a requirement for reproducible per-particle substreams.
  double next_normal() {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_uniform();
  }

 private:
  std::uint64_t key_;
  std::uint64_t n_{0};
};

// FNV-1a for mapping string ids (participant names) onto stream indices.
inline constexpr std::uint64_t fnv1a(const char* s, std::size_t n) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(s[i]);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace curio::rng
