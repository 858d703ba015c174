#include "core/rng.hpp"

#include <cmath>

namespace ltir {

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double key_uniform(uint64_t key, uint64_t stream) {
  const uint64_t bits = mix64(key ^ mix64(stream + 0x5851f42d4c957f2dull));
  // 53-bit mantissa, shifted into (0, 1].
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

double counter_gaussian(uint64_t seed, uint64_t trial, uint32_t channel_id, uint32_t tap) {
  uint64_t key = mix64(seed);
  key = mix64(key ^ trial);
  key = mix64(key ^ (static_cast<uint64_t>(channel_id) << 32 | tap));
  const double u1 = key_uniform(key, 0);
  const double u2 = key_uniform(key, 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace ltir
