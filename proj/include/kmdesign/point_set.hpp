#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace kmdesign {

/// Largest point count supported; subsets are stored as 64-bit masks.
inline constexpr int kMaxPoints = 64;

/// A subset of {1, ..., v} for v <= 64.
///
/// Bit i of the mask holds point i + 1. Ordering is lexicographic on the
/// ascending sequence of points, so {1,2,9} < {1,3,4} and {1,2} < {1,2,3}.
class PointSet {
 public:
  constexpr PointSet() = default;
  constexpr explicit PointSet(std::uint64_t mask) : mask_(mask) {}

  /// Builds from 1-based points; throws InputError on a point outside
  /// [1, degree] or a repeated point.
  static PointSet from_points(std::span<const int> points, int degree);
  static PointSet from_points(std::initializer_list<int> points, int degree) {
    return from_points(std::span<const int>(points.begin(), points.size()), degree);
  }
  /// All of {1, ..., degree}.
  static PointSet full(int degree) {
    return PointSet(degree >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << degree) - 1);
  }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool contains(int point) const {
    return point >= 1 && point <= kMaxPoints && ((mask_ >> (point - 1)) & 1U) != 0;
  }
  constexpr bool is_subset_of(PointSet other) const { return (mask_ & ~other.mask_) == 0; }
  /// Largest point, or 0 when empty.
  constexpr int max_point() const { return mask_ == 0 ? 0 : 64 - std::countl_zero(mask_); }

  /// Ascending 1-based points.
  std::vector<int> points() const;
  std::string to_string() const;

  template <typename F>
  void for_each(F&& f) const {
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) f(std::countr_zero(m) + 1);
  }

  friend constexpr PointSet operator|(PointSet a, PointSet b) { return PointSet(a.mask_ | b.mask_); }
  friend constexpr PointSet operator&(PointSet a, PointSet b) { return PointSet(a.mask_ & b.mask_); }
  friend constexpr bool operator==(PointSet a, PointSet b) = default;
  friend constexpr std::strong_ordering operator<=>(PointSet a, PointSet b) {
    const std::uint64_t diff = a.mask_ ^ b.mask_;
    if (diff == 0) return std::strong_ordering::equal;
    const int pos = std::countr_zero(diff);
    // Below pos both sequences agree. The set holding pos continues with pos;
    // the other continues with something larger or ends (and is then a prefix).
    const bool a_has = ((a.mask_ >> pos) & 1U) != 0;
    const std::uint64_t other_tail = (a_has ? b.mask_ : a.mask_) >> pos;
    const bool other_ends = other_tail == 0;
    if (a_has) return other_ends ? std::strong_ordering::greater : std::strong_ordering::less;
    return other_ends ? std::strong_ordering::less : std::strong_ordering::greater;
  }

 private:
  std::uint64_t mask_ = 0;
};

/// Calls f(PointSet) for every k-subset of {1, ..., v} in lexicographic order.
/// Returning false from f stops the iteration early (void callbacks run to the end).
template <typename F>
void for_each_k_subset(int v, int k, F&& f) {
  if (k < 0 || k > v) return;
  if (k == 0) {
    if constexpr (std::is_same_v<std::invoke_result_t<F, PointSet>, bool>) {
      (void)f(PointSet{});
    } else {
      f(PointSet{});
    }
    return;
  }
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::uint64_t mask = 0;
    for (int i : idx) mask |= std::uint64_t{1} << i;
    if constexpr (std::is_same_v<std::invoke_result_t<F, PointSet>, bool>) {
      if (!f(PointSet(mask))) return;
    } else {
      f(PointSet(mask));
    }
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == v - k + pos) --pos;
    if (pos < 0) return;
    ++idx[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < k; ++i) idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
}

/// Calls f(PointSet) for every t-subset of the given set, lexicographically.
template <typename F>
void for_each_subset_of(PointSet set, int t, F&& f) {
  const std::vector<int> pts = set.points();
  const int n = static_cast<int>(pts.size());
  for_each_k_subset(n, t, [&](PointSet local) {
    std::uint64_t mask = 0;
    local.for_each([&](int i) { mask |= std::uint64_t{1} << (pts[static_cast<std::size_t>(i - 1)] - 1); });
    f(PointSet(mask));
  });
}

}  // namespace kmdesign

template <>
struct std::hash<kmdesign::PointSet> {
  std::size_t operator()(kmdesign::PointSet s) const noexcept {
    std::uint64_t x = s.mask() + 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<std::size_t>(x ^ (x >> 31));
  }
};
