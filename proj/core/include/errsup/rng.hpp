#ifndef ERRSUP_RNG_HPP
#define ERRSUP_RNG_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace errsup {

// xoshiro256** seeded through splitmix64. Self-contained so that sampling is
// bit-reproducible for a given seed regardless of the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);

  // Uniform integer in the inclusive range [lo, hi].
  int uniform_int(int lo, int hi);

  // k distinct values from [lo, hi], in draw order.
  std::vector<int> sample_distinct(int lo, int hi, int k);

  // Index sampled proportionally to probs (probs need not be normalized).
  int categorical(std::span<const double> probs);

  // Independent stream derived from a base seed and a stream tag.
  static Rng derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

// FNV-1a over bytes; used to derive data-dependent seeds.
std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ull);

}  // namespace errsup

#endif
