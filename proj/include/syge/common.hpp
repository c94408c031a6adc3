#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>

namespace syge {

// Thrown for unreadable/unwritable/malformed files. CLI maps this to exit code 2.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a computation has no defined result (undefined rho, NaN epoch, ...).
// CLI maps this to exit code 1.
struct compute_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// FNV-1a, used for dataset/checkpoint fingerprints in run manifests.
inline uint64_t fnv1a64(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

// char-pointer overload keeps a (literal, seed) call from binding the seed
// to the length parameter above
inline uint64_t fnv1a64(const char* s, uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a64(static_cast<const void*>(s), std::char_traits<char>::length(s), h);
}

inline uint64_t fnv1a64(const std::string& s, uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a64(s.data(), s.size(), h);
}

}  // namespace syge
