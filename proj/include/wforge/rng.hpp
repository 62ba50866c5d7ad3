#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace wforge {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes);

// Seedable generator with deterministic substreams. derive() does not touch the
// parent's engine state, so shards of a batch can each take derive(index) and
// produce the same output regardless of scheduling.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  Rng derive(std::uint64_t index) const;
  Rng derive(std::string_view name) const;

  std::uint64_t key() const { return key_; }

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::numeric_limits<result_type>::min(); }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  // [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  // log of a Gamma(shape, 1) draw; stays finite for very small shapes.
  double log_gamma_draw(double shape);
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace wforge
