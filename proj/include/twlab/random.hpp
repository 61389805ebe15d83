#pragma once

#include <cstdint>
#include <limits>

namespace twlab {

// SplitMix64: a counter advanced by a fixed odd constant and passed through
// a bijective mixer. Output depends only on (seed, draw index), which keeps
// every experiment reproducible byte-for-byte across platforms. Standard
// library distributions are avoided for the same reason.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : counter_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  result_type operator()() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return mix(counter_);
  }

  // Uniform integer in [0, bound), rejection-sampled to avoid modulo bias.
  std::uint64_t uniform(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t limit = max() - max() % bound;
    std::uint64_t r;
    do r = (*this)();
    while (r >= limit);
    return r % bound;
  }

  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(uniform(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // 53-bit uniform double in [0, 1).
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  // Independent stream for sample `index` of an experiment seeded by `seed`.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix(seed ^ mix(index + 0x632be59bd9b4e019ULL)));
  }

 private:
  std::uint64_t counter_;
};

}  // namespace twlab
