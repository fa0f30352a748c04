#include "fidsamp/random.hpp"

#include <cmath>
#include <stdexcept>

namespace fidsamp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  // Spread (seed, stream_id) over eight 32-bit words so that nearby keys
  // land in unrelated engine states.
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ (0x9E3779B97F4A7C15ULL * (stream_id + 1)));
  const std::uint64_t c = splitmix64(b + stream_id);
  const std::uint64_t d = splitmix64(c ^ seed);
  std::seed_seq seq{
      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
      static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d >> 32)};
  engine_.seed(seq);
}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform01() {
  // 53 random bits, shifted into (0,1): the +0.5 offset keeps both
  // endpoints strictly excluded.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_normal_ = r * std::sin(a);
  has_spare_normal_ = true;
  return r * std::cos(a);
}

double RandomStream::gamma(double shape) {
  if (!(shape > 0.0)) throw std::domain_error("RandomStream::gamma: shape must be > 0");
  if (shape < 1.0) {
    // Boost: if G ~ Gamma(shape+1) and U uniform, G * U^(1/shape) ~ Gamma(shape).
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform01(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

RandomStream RandomStream::substream(std::uint64_t k) const {
  return RandomStream(seed_, splitmix64(stream_id_ ^ (0x9E3779B97F4A7C15ULL * (k + 1))));
}

}  // namespace fidsamp
