#pragma once

#include <array>
#include <cstdint>

namespace fpp {

// Counter-based random streams built on Philox4x32-10 (Salmon et al.,
// "Parallel Random Numbers: As Easy as 1, 2, 3", SC'11).  A draw is a pure
// function of (key, counter), so sampling is order-independent and safe to
// parallelize.  The implementation is checked against the reference
// known-answer vectors from the Random123 distribution in the test suite.
struct PhiloxKey {
  uint32_t k0;
  uint32_t k1;
};

struct PhiloxCounter {
  uint32_t x0;
  uint32_t x1;
  uint32_t x2;
  uint32_t x3;
};

std::array<uint32_t, 4> philox4x32(PhiloxCounter ctr, PhiloxKey key);

// Stream layout used throughout the project:
//   key     = (master_seed lo32, master_seed hi32)
//   counter = (unit lo32, unit hi32, stream, draw)
// where `unit` is typically an edge index inside a box, `stream` separates
// replications, and `draw` separates successive draws for the same unit
// (draw 0 is the base field; influence probes use draw >= 1).
uint64_t philox_u64(uint64_t master_seed, uint64_t unit, uint32_t stream,
                    uint32_t draw);

// Uniform double in [0, 1) with 53 random bits.
double philox_u01(uint64_t master_seed, uint64_t unit, uint32_t stream,
                  uint32_t draw);

// FNV-1a, used for config digests and record-file integrity footers.
uint64_t fnv1a64(const void* data, std::size_t len, uint64_t seed = 0xcbf29ce484222325ull);
uint64_t fnv1a64_append(uint64_t hash, const void* data, std::size_t len);

}  // namespace fpp
