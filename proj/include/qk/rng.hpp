#pragma once
// Counter-based deterministic RNG.  Each (seed, stream, index) triple yields an
// independent generator, so sample loops produce identical draws whether they
// run serially or across OpenMP threads.

#include <cstdint>

namespace qk {

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

inline std::uint64_t mix3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  SplitMix64 g(a);
  std::uint64_t h = g.next() ^ b;
  SplitMix64 g2(h);
  h = g2.next() ^ c;
  SplitMix64 g3(h);
  return g3.next();
}

class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
      : gen_(mix3(seed, stream, index)) {}

  std::uint64_t bits() { return gen_.next(); }

  double uniform() {  // [0, 1)
    return static_cast<double>(bits() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // inclusive range
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(bits() % span);
  }

 private:
  SplitMix64 gen_;
};

}  // namespace qk
