#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace mlgw {

// splitmix64 finalizer; used to fold structured stream ids into engine seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds a structured path into a derived seed (same scheme as Rng::stream);
// used where a sub-computation needs its own full seed, e.g. per fold.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(seed);
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x9e3779b97f4a7c15ULL));
  return s;
}

// Stream domain tags keep independently derived streams from colliding even
// when their numeric path components coincide.
namespace stream_tag {
inline constexpr std::uint64_t init = 1;       // parameter initialization
inline constexpr std::uint64_t shuffle = 2;    // per-epoch batch shuffling
inline constexpr std::uint64_t episode = 3;    // training episode sampling
inline constexpr std::uint64_t predict = 4;    // prediction episode sampling
inline constexpr std::uint64_t trace = 5;      // trace-export episode sampling
inline constexpr std::uint64_t synthetic = 6;  // synthetic graph generation
inline constexpr std::uint64_t fold = 7;       // stratified fold tie-breaking
inline constexpr std::uint64_t protocol = 8;   // per-fold training seeds
}  // namespace stream_tag

/* Deterministic RNG. The engine (mt19937_64) is fully specified by the
   standard, and every draw transform below is hand-rolled, so identical
   seeds give identical draws on every platform and standard library.
   Results must never depend on which thread performs a draw; callers derive
   one stream per logical task (episode, node, ...) via Rng::stream. */
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Derives an independent stream from a structured path, e.g.
  //   Rng::stream(seed, {stream_tag::episode, epoch, task_index})
  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix64(seed);
    for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x9e3779b97f4a7c15ULL));
    return Rng(s);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0,1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), n > 0; unbiased via rejection.
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  // Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01(), u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  // Index drawn proportionally to non-negative weights (sum must be > 0).
  std::size_t categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double u = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

  // Fisher-Yates; deterministic replacement for std::shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mlgw
