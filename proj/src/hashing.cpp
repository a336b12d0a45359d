#include "mrsim/hashing.hpp"

#include <stdexcept>

namespace mrsim {

namespace {
constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;
}  // namespace

KeyId hash_key(std::span<const unsigned char> key_bytes) {
  if (key_bytes.empty()) {
    throw std::invalid_argument("hash_key: key bytes must be non-empty");
  }
  std::uint64_t h = kFnvOffset;
  for (unsigned char b : key_bytes) {
    h ^= static_cast<std::uint64_t>(b);
    h *= kFnvPrime;
  }
  return mix64(h);
}

KeyId hash_key(std::string_view key_bytes) {
  return hash_key(std::span<const unsigned char>(
      reinterpret_cast<const unsigned char*>(key_bytes.data()),
      key_bytes.size()));
}

}  // namespace mrsim
