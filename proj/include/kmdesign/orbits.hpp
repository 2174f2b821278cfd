#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kmdesign/group.hpp"
#include "kmdesign/point_set.hpp"

namespace kmdesign {

/// A G-orbit of k-subsets, named by its lexicographically least member.
struct SubsetOrbit {
  PointSet representative;
  std::uint64_t size = 0;
  std::uint64_t stabilizer_order = 0;

  friend bool operator==(const SubsetOrbit&, const SubsetOrbit&) = default;
};

/// Orbits of k-subsets, sorted by representative.
///
/// A complete set covers every k-subset. An incomplete set is a short-orbit
/// census: exactly the orbits of size <= size_bound.
struct OrbitSet {
  int degree = 0;
  int subset_size = 0;
  std::uint64_t group_order = 0;
  std::vector<SubsetOrbit> orbits;
  bool complete = true;
  std::optional<std::uint64_t> size_bound;
  /// Free-form label of the group (its file name when read from disk).
  std::string group_label;

  friend bool operator==(const OrbitSet&, const OrbitSet&) = default;
};

struct OrbitOptions {
  /// Refuse complete enumeration beyond this many k-subsets.
  std::uint64_t subset_guard = 100'000'000;
  int workers = 1;
};

/// Lexicographically least image of s under g.
PointSet lex_min_image(PointSet s, const PermutationGroup& g);

/// Orbit of s: representative, size and stabilizer order.
SubsetOrbit orbit_of(PointSet s, const PermutationGroup& g);

/// Every orbit of k-subsets. Throws LimitError when C(v, k) exceeds the guard.
OrbitSet enumerate_orbits(const PermutationGroup& g, int k, const OrbitOptions& options = {});

/// Exactly the orbits of k-subsets of size <= bound; requires bound < |G|.
///
/// A short orbit has a stabilizer of order >= 2, so the stabilizer holds an
/// element of prime order. For one generator of each conjugacy class of
/// prime-order subgroups, all k-subsets it fixes (unions of its cycles) are
/// candidates; their true orbits are computed and filtered by size.
OrbitSet enumerate_short_orbits(const PermutationGroup& g, int k, std::uint64_t bound,
                                const OrbitOptions& options = {});

/// One generator per conjugacy class of subgroups of prime order, as
/// element indices, ascending.
std::vector<std::size_t> prime_order_class_representatives(const PermutationGroup& g);

}  // namespace kmdesign
