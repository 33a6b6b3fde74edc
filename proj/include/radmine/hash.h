#ifndef RADMINE_HASH_H_
#define RADMINE_HASH_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace radmine {

inline constexpr uint64_t kFnvOffsetBasis = 14695981039346656037ULL;
inline constexpr uint64_t kFnvPrime = 1099511628211ULL;

// 64-bit FNV-1a. `basis` lets callers chain several pieces into one hash.
constexpr uint64_t fnv1a64(std::string_view bytes,
                           uint64_t basis = kFnvOffsetBasis) {
  uint64_t h = basis;
  for (char c : bytes) {
    h ^= static_cast<uint8_t>(c);
    h *= kFnvPrime;
  }
  return h;
}

inline uint64_t fnv1a64(std::span<const uint8_t> bytes,
                        uint64_t basis = kFnvOffsetBasis) {
  uint64_t h = basis;
  for (uint8_t b : bytes) {
    h ^= b;
    h *= kFnvPrime;
  }
  return h;
}

// Lowercase 16-digit hex rendering used for fingerprints and model hashes.
std::string hex64(uint64_t value);

}  // namespace radmine

#endif  // RADMINE_HASH_H_
