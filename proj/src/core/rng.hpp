#pragma once

#include <cstdint>

namespace ltir {

// splitmix64 finalizer; the counter-based generators below hash disjoint key
// tuples so draws are independent of evaluation order (parallel-safe).
uint64_t mix64(uint64_t x);

// Uniform in (0, 1].
double key_uniform(uint64_t key, uint64_t stream);

// One N(0, 1) draw keyed by (seed, trial, channel_id, tap). Box-Muller on two
// keyed uniforms; same key always yields the same value.
double counter_gaussian(uint64_t seed, uint64_t trial, uint32_t channel_id, uint32_t tap);

}  // namespace ltir
