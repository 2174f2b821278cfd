#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "kmdesign/point_set.hpp"

namespace kmdesign {

/// A permutation of {1, ..., degree}, degree <= 64.
///
/// Composition convention, used everywhere in the project: compose(p, q)
/// applies q first, so compose(p, q)(i) == p(q(i)).
class Permutation {
 public:
  /// Identity of the given degree.
  explicit Permutation(int degree);

  /// images[i - 1] is the image of point i; must be a bijection on {1..n}.
  static Permutation from_images(const std::vector<int>& images);

  int degree() const { return static_cast<int>(image_.size()); }
  int operator()(int point) const { return image_[static_cast<std::size_t>(point - 1)] + 1; }
  std::vector<int> images() const;

  bool is_identity() const;
  Permutation inverse() const;
  /// Least n >= 1 with p^n = identity.
  std::uint64_t order() const;
  /// Cycles of length >= 2, each starting at its smallest point.
  std::vector<std::vector<int>> cycles() const;
  /// Cycle notation, "()" for the identity.
  std::string to_cycle_string() const;

  /// {p(x) : x in s}. Throws InputError if s has points beyond degree().
  PointSet apply(PointSet s) const;
  /// Same as apply() without the range check.
  PointSet apply_unchecked(PointSet s) const {
    std::uint64_t out = 0;
    for (std::uint64_t m = s.mask(); m != 0; m &= m - 1) {
      out |= std::uint64_t{1} << image_[static_cast<std::size_t>(std::countr_zero(m))];
    }
    return PointSet(out);
  }

  const std::vector<std::uint8_t>& raw_images() const { return image_; }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint8_t> image_;  // 0-based
};

/// p after q: result(i) = p(q(i)). Throws InputError on degree mismatch.
Permutation compose(const Permutation& p, const Permutation& q);

/// Parses cycle notation such as "(1,2)(3,4,5)". Whitespace is ignored,
/// unlisted points are fixed, and the empty string is the identity.
Permutation parse_cycles(std::string_view text, int degree);

inline PointSet apply_to_subset(const Permutation& p, PointSet s) { return p.apply(s); }

}  // namespace kmdesign

template <>
struct std::hash<kmdesign::Permutation> {
  std::size_t operator()(const kmdesign::Permutation& p) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (std::uint8_t x : p.raw_images()) h = (h ^ x) * 1099511628211ULL;
    return h;
  }
};
