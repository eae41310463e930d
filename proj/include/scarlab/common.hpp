#pragma once

// Shared error types and small utilities used across the library.
//
// Error contract (mirrored by the CLI exit codes):
//   std::invalid_argument  -> bad user input / precondition violation (exit 2)
//   CapacityError          -> resource cap exceeded, e.g. dense solver cap (exit 3)
//   ConsistencyError       -> internal consistency check failed (exit 4)

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace scarlab {

struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

struct ConsistencyError : std::runtime_error {
  explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

// Dense-diagonalization dimension cap. The built-in default keeps desk-scale
// memory/runtime bounded; the SCARLAB_DENSE_CAP environment variable
// overrides it, and most entry points also accept an explicit cap.
inline std::size_t dense_cap_default() { return 12000; }

inline std::size_t dense_cap() {
  if (const char* env = std::getenv("SCARLAB_DENSE_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw std::invalid_argument("SCARLAB_DENSE_CAP must be a positive integer");
  }
  return dense_cap_default();
}

}  // namespace scarlab
