#include "wforge/rng.hpp"

#include <cmath>

#include "wforge/error.hpp"

namespace wforge {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng::Rng(std::uint64_t seed) : key_(seed), engine_(splitmix64(seed)) {}

Rng Rng::derive(std::uint64_t index) const { return Rng(splitmix64(key_ ^ splitmix64(index + 0x632be59bd9b4e019ULL))); }

Rng Rng::derive(std::string_view name) const { return derive(fnv1a64(name)); }

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  // Box-Muller on (0, 1] so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::log_gamma_draw(double shape) {
  if (!(shape > 0.0)) throw InvalidInput("gamma shape must be positive");
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^{1/a}
    const double u = 1.0 - uniform();
    return log_gamma_draw(shape + 1.0) + std::log(u) / shape;
  }
  // Marsaglia-Tsang.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return std::log(d * v);
  }
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidInput("empty range");
  // Rejection to avoid modulo bias.
  const std::uint64_t limit = max() - max() % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r < limit) return r % bound;
  }
}

}  // namespace wforge
