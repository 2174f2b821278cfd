#pragma once

#include <cstdint>
#include <numeric>

#include "kmdesign/error.hpp"

namespace kmdesign {

/// Binomial coefficient C(n, r); throws LimitError on 64-bit overflow.
inline std::uint64_t binomial(std::int64_t n, std::int64_t r) {
  if (r < 0 || n < 0 || r > n) return 0;
  if (r > n - r) r = n - r;
  unsigned __int128 acc = 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    // acc * (n - r + i) / i is exact at every step.
    acc = acc * static_cast<unsigned __int128>(n - r + i) / static_cast<unsigned __int128>(i);
    if (acc > UINT64_MAX) throw LimitError("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

/// Overflow-checked multiplication.
inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw LimitError("64-bit overflow in product");
  return out;
}

/// Non-negative fraction kept in lowest terms.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Fraction make(unsigned __int128 num, unsigned __int128 den) {
    if (den == 0) throw InputError("fraction with zero denominator");
    unsigned __int128 a = num, b = den;
    while (b != 0) {
      unsigned __int128 r = a % b;
      a = b;
      b = r;
    }
    const unsigned __int128 g = a == 0 ? 1 : a;
    num /= g;
    den /= g;
    if (num > UINT64_MAX || den > UINT64_MAX) throw LimitError("fraction overflows 64 bits");
    return {static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den)};
  }

  bool is_integer() const { return den == 1; }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

}  // namespace kmdesign
