#include "fpp/rng.hpp"

namespace fpp {

namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
  uint64_t p = static_cast<uint64_t>(a) * b;
  hi = static_cast<uint32_t>(p >> 32);
  lo = static_cast<uint32_t>(p);
}

inline PhiloxCounter round_once(PhiloxCounter c, PhiloxKey k) {
  uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kPhiloxM0, c.x0, hi0, lo0);
  mulhilo(kPhiloxM1, c.x2, hi1, lo1);
  return PhiloxCounter{hi1 ^ c.x1 ^ k.k0, lo1, hi0 ^ c.x3 ^ k.k1, lo0};
}

}  // namespace

std::array<uint32_t, 4> philox4x32(PhiloxCounter ctr, PhiloxKey key) {
  for (int r = 0; r < 9; ++r) {
    ctr = round_once(ctr, key);
    key.k0 += kPhiloxW0;
    key.k1 += kPhiloxW1;
  }
  ctr = round_once(ctr, key);
  return {ctr.x0, ctr.x1, ctr.x2, ctr.x3};
}

uint64_t philox_u64(uint64_t master_seed, uint64_t unit, uint32_t stream,
                    uint32_t draw) {
  PhiloxKey key{static_cast<uint32_t>(master_seed),
                static_cast<uint32_t>(master_seed >> 32)};
  PhiloxCounter ctr{static_cast<uint32_t>(unit),
                    static_cast<uint32_t>(unit >> 32), stream, draw};
  auto out = philox4x32(ctr, key);
  return (static_cast<uint64_t>(out[0]) << 32) | out[1];
}

double philox_u01(uint64_t master_seed, uint64_t unit, uint32_t stream,
                  uint32_t draw) {
  uint64_t bits = philox_u64(master_seed, unit, stream, draw);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

uint64_t fnv1a64(const void* data, std::size_t len, uint64_t seed) {
  return fnv1a64_append(seed, data, len);
}

uint64_t fnv1a64_append(uint64_t hash, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    hash ^= p[i];
    hash *= 0x100000001b3ull;
  }
  return hash;
}

}  // namespace fpp
