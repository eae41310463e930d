#pragma once

// Fibonacci numbers with the convention F(1) = F(2) = 1, and the constrained
// Hilbert-space dimension formulas that follow from it:
//   periodic chain of L sites:  D = F(L-1) + F(L+1)   (Lucas numbers)
//   open chain of L sites:      D = F(L+2)

#include <cstdint>
#include <stdexcept>

namespace scarlab {

inline std::uint64_t fibonacci(int n) {
  if (n < 0) throw std::invalid_argument("fibonacci: negative index");
  std::uint64_t a = 0, b = 1;  // F(0), F(1)
  for (int i = 0; i < n; ++i) {
    std::uint64_t c = a + b;
    a = b;
    b = c;
  }
  return a;
}

inline std::uint64_t dimension_pbc(int L) { return fibonacci(L - 1) + fibonacci(L + 1); }

inline std::uint64_t dimension_obc(int L) { return fibonacci(L + 2); }

}  // namespace scarlab
