#pragma once

#include <cstdint>
#include <span>

namespace genpair {

/// XXH32 of a byte string, bit-compatible with the reference xxHash implementation.
std::uint32_t xxhash32(std::span<const std::uint8_t> data, std::uint32_t seed) noexcept;

} // namespace genpair
