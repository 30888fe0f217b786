#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace t1cp {

// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Counter-based stream: output i is mix64(key + (i + 1) * kGolden). Cheap to
// create per vertex and fully determined by its key.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  explicit constexpr CounterRng(std::uint64_t key) noexcept : state_(key) {}
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  constexpr result_type operator()() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

// Key of the clock stream (vertex, kind) under a master seed. Vertex and kind
// enter only through this key, so a vertex's stream does not depend on how
// many other vertices exist.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t vertex, std::uint64_t kind) noexcept {
  return mix64(mix64(seed + kGolden) ^ mix64(((vertex << 1) | kind) + 0x632be59bd9b4e019ULL));
}

// Seed of replica i under a master seed. Also used to split independent
// sub-experiments via distinct tags.
constexpr std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master ^ mix64(index + 0x5851f42d4c957f2dULL));
}

// Uniform double in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t x) noexcept { return static_cast<double>(x >> 11) * 0x1.0p-53; }

template <class Rng>
double unit_draw(Rng& rng) {
  return to_unit(rng());
}

// Exponential(rate) by inversion; rate must be positive.
template <class Rng>
double exponential_draw(Rng& rng, double rate) {
  return -std::log1p(-unit_draw(rng)) / rate;
}

// Uniform integer in [0, n), n >= 1, by Lemire's multiply-and-reject.
template <class Rng>
std::uint64_t bounded_draw(Rng& rng, std::uint64_t n) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t floor = (0 - n) % n;
    while (low < floor) {
      m = static_cast<unsigned __int128>(rng()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace t1cp
