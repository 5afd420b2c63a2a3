// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace molgp {

// All substructure identifiers are produced by 64-bit FNV-1a over the
// little-endian byte encoding of the input fields, eight bytes per field.
// The function is fixed so identifiers (and vocabularies persisted to disk)
// are reproducible across builds and platforms.
inline constexpr std::uint64_t kFnv64Offset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnv64Prime = 0x100000001b3ULL;

class Fnv1a64 {
 public:
  void feed_byte(std::uint8_t b) {
    state_ ^= b;
    state_ *= kFnv64Prime;
  }

  void feed_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      feed_byte(static_cast<std::uint8_t>(v & 0xff));
      v >>= 8;
    }
  }

  // Signed fields are encoded as two's-complement 64-bit words.
  void feed_i64(std::int64_t v) { feed_u64(static_cast<std::uint64_t>(v)); }

  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = kFnv64Offset;
};

}  // namespace molgp
