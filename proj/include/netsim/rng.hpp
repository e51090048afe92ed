#pragma once

#include <cmath>
#include <cstdint>

namespace netsim::rng {

// SplitMix64 output finalizer (Stafford mix 13). Bijective on u64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Fold one key component into a running hash with full avalanche.
constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) noexcept {
  h += kGolden;
  h ^= v * 0xff51afd7ed558ccdULL;
  return mix64(h);
}

// derive_key(seed, p1, p2, ...): stable key for counter-based draws.
// Every random quantity in the toolkit is a pure function of such a key,
// so replication/step/entity streams never share state.
template <class... Parts>
constexpr std::uint64_t derive_key(std::uint64_t seed, Parts... parts) noexcept {
  std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
  ((h = combine(h, static_cast<std::uint64_t>(parts))), ...);
  return h;
}

// Stream-purpose tags keeping unrelated derivations disjoint.
namespace tag {
inline constexpr std::uint64_t edge = 0x45u;
inline constexpr std::uint64_t recovery = 0x52u;
inline constexpr std::uint64_t init = 0x49u;
inline constexpr std::uint64_t des = 0x44u;
inline constexpr std::uint64_t dts = 0x54u;
inline constexpr std::uint64_t graph = 0x47u;
inline constexpr std::uint64_t block = 0x42u;
inline constexpr std::uint64_t misc = 0x4du;
}  // namespace tag

// Uniform in the open interval (0,1); never returns 0 or 1, so
// -log(u) is finite and strictly positive.
constexpr double unit_from_bits(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline double exp_from_key(std::uint64_t key) noexcept {
  return -std::log(unit_from_bits(mix64(key ^ 0xa0761d6478bd642fULL)));
}

// Sequential SplitMix64 stream. One instance per independent consumer
// (engine run, graph construction attempt, ...), seeded via derive_key.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) noexcept : state_(derive_key(seed)) {}

  std::uint64_t next_u64() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  // (0,1)
  double next_unit() noexcept { return unit_from_bits(next_u64()); }

  // Exp(1), strictly positive
  double next_exponential() noexcept { return -std::log(next_unit()); }

  // uniform on {0, ..., bound-1}; bound >= 1
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % bound;
  }

 private:
  std::uint64_t state_;
};

double normal_sample(Stream& s) noexcept;

// Gamma(shape, scale=1), Marsaglia-Tsang; shape > 0.
double gamma_sample(Stream& s, double shape) noexcept;

// Poisson(mean), mean >= 0.
std::uint64_t poisson_sample(Stream& s, double mean) noexcept;

}  // namespace netsim::rng
