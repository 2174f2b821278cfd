#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kmdesign/designs.hpp"
#include "kmdesign/permutation.hpp"

namespace kmdesign {

/// Relabeling-invariant summary of a design. Isomorphic designs have equal
/// fingerprints; the converse does not hold.
struct Fingerprint {
  int v = 0;
  int k = 0;
  std::size_t b = 0;
  /// |B ∩ B'| -> number of unordered block pairs.
  std::map<int, std::uint64_t> intersection_histogram;
  /// For each block, counts of the other blocks meeting it in 0..k points;
  /// sorted.
  std::vector<std::vector<std::uint32_t>> profiles;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

Fingerprint fingerprint(const Design& d);

enum class IsoStatus { kIsomorphic, kNonIsomorphic, kUnknown };

struct IsoResult {
  IsoStatus status = IsoStatus::kUnknown;
  /// Maps the blocks of the first design onto those of the second.
  std::optional<Permutation> witness;
  std::uint64_t nodes = 0;
};

struct IsoOptions {
  std::uint64_t node_budget = 2'000'000;
};

/// Backtracking over point images with colour refinement of the
/// point-block incidence structure; a leaf is accepted only after the full
/// block sets agree. Exceeding the budget gives kUnknown.
IsoResult isomorphic(const Design& a, const Design& b, const IsoOptions& options = {});

struct AutomorphismResult {
  /// False when the budget ran out; the order is then a lower bound.
  bool complete = false;
  /// Orbit length of each base point in the stabilizer of the earlier ones.
  std::vector<std::uint64_t> orbit_lengths;
  std::vector<Permutation> generators;
  std::uint64_t nodes = 0;

  /// Product of the orbit lengths, when it fits in 64 bits.
  std::optional<std::uint64_t> order() const;
  /// Product of the orbit lengths in decimal.
  std::string order_string() const;
};

AutomorphismResult automorphism_order(const Design& d, const IsoOptions& options = {});

struct IsoClasses {
  /// Indices into the input, each class ascending, classes ordered by
  /// their first member.
  std::vector<std::vector<std::size_t>> classes;
  /// True when no pairwise test ran out of budget.
  bool complete = true;
};

/// Partition into isomorphism classes. Designs are bucketed by fingerprint,
/// then tested pairwise against class representatives.
IsoClasses classify(const std::vector<Design>& designs, const IsoOptions& options = {});

}  // namespace kmdesign
