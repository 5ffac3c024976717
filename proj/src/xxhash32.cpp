#include "genpair/xxhash32.hpp"

#include <bit>
#include <cstring>

namespace genpair {

namespace {

constexpr std::uint32_t kPrime1 = 0x9E3779B1u;
constexpr std::uint32_t kPrime2 = 0x85EBCA77u;
constexpr std::uint32_t kPrime3 = 0xC2B2AE3Du;
constexpr std::uint32_t kPrime4 = 0x27D4EB2Fu;
constexpr std::uint32_t kPrime5 = 0x165667B1u;

inline std::uint32_t read32(const std::uint8_t* p) noexcept {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  return v; // little-endian host asserted in packed_sequence.hpp
}

inline std::uint32_t round(std::uint32_t acc, std::uint32_t lane) noexcept {
  acc += lane * kPrime2;
  acc = std::rotl(acc, 13);
  return acc * kPrime1;
}

} // namespace

std::uint32_t xxhash32(std::span<const std::uint8_t> data, std::uint32_t seed) noexcept {
  const std::uint8_t* p = data.data();
  const std::uint8_t* const end = p + data.size();
  std::uint32_t h;

  if (data.size() >= 16) {
    std::uint32_t v1 = seed + kPrime1 + kPrime2;
    std::uint32_t v2 = seed + kPrime2;
    std::uint32_t v3 = seed;
    std::uint32_t v4 = seed - kPrime1;
    const std::uint8_t* const limit = end - 16;
    do {
      v1 = round(v1, read32(p));
      v2 = round(v2, read32(p + 4));
      v3 = round(v3, read32(p + 8));
      v4 = round(v4, read32(p + 12));
      p += 16;
    } while (p <= limit);
    h = std::rotl(v1, 1) + std::rotl(v2, 7) + std::rotl(v3, 12) + std::rotl(v4, 18);
  } else {
    h = seed + kPrime5;
  }

  h += static_cast<std::uint32_t>(data.size());

  while (p + 4 <= end) {
    h += read32(p) * kPrime3;
    h = std::rotl(h, 17) * kPrime4;
    p += 4;
  }
  while (p < end) {
    h += static_cast<std::uint32_t>(*p) * kPrime5;
    h = std::rotl(h, 11) * kPrime1;
    ++p;
  }

  h ^= h >> 15;
  h *= kPrime2;
  h ^= h >> 13;
  h *= kPrime3;
  h ^= h >> 16;
  return h;
}

} // namespace genpair
