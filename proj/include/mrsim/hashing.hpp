#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "mrsim/types.hpp"

namespace mrsim {

/// Murmur3 64-bit finalizer. Bijective on uint64, so distinct inputs map to
/// distinct outputs; used both as a hash mixer and as a cheap way to mint
/// fresh distinct KeyIds from counters.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

/// Maps a uint64 to [0,1) using the top 53 bits; fully pinned, no libc
/// involvement, identical on every platform.
constexpr double to_unit_double(std::uint64_t x) noexcept {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Stable 64-bit digest of the serialized key bytes: FNV-1a with pinned
/// constants, folded through mix64 so the low bits are well distributed for
/// `mod R` partitioning. Throws std::invalid_argument on empty input.
KeyId hash_key(std::span<const unsigned char> key_bytes);
KeyId hash_key(std::string_view key_bytes);

}  // namespace mrsim
