#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kmdesign/combinatorics.hpp"
#include "kmdesign/error.hpp"
#include "kmdesign/group.hpp"
#include "kmdesign/km_matrix.hpp"
#include "kmdesign/point_set.hpp"
#include "kmdesign/solver.hpp"

namespace kmdesign {

/// Two blocks that would coincide (expand, disjoint_union).
class DuplicateBlockError : public InputError {
 public:
  DuplicateBlockError(const std::string& what, PointSet block) : InputError(what), block_(block) {}
  PointSet block() const { return block_; }

 private:
  PointSet block_;
};

struct DesignParameters {
  int t = 0;
  int v = 0;
  int k = 0;
  std::uint64_t lambda = 0;
  /// lambda_s[s] for s = 0..t; lambda_s[t] == lambda.
  std::vector<Fraction> lambda_s;
  /// lambda_0, when it is an integer.
  std::optional<std::uint64_t> b;
  std::uint64_t lambda_min = 0;
  std::uint64_t lambda_max = 0;
  std::uint64_t m = 0;
  bool admissible = false;
  bool fisher_ok = true;
};

/// Throws InputError unless 0 < t < k < v.
DesignParameters parameters(int t, int v, int k, std::uint64_t lambda);

/// Sum over i of (-1)^i C(t, i) lambda_i: the lambda of the complementary
/// design. Requires admissible parameters.
std::int64_t complement_lambda(const DesignParameters& p);

/// Point count, block size and a sorted, duplicate-free block list.
class Design {
 public:
  Design() = default;
  /// Sorts the blocks. Throws InputError on a wrong block size, a point
  /// out of range or a repeated block.
  Design(int v, int k, std::vector<PointSet> blocks);

  int v() const { return v_; }
  int k() const { return k_; }
  std::size_t b() const { return blocks_.size(); }
  const std::vector<PointSet>& blocks() const { return blocks_; }
  bool contains(PointSet block) const;

  friend bool operator==(const Design&, const Design&) = default;

 private:
  int v_ = 0;
  int k_ = 0;
  std::vector<PointSet> blocks_;
};

/// Union of the G-orbits of the base blocks. Throws DuplicateBlockError
/// when two base blocks share an orbit.
Design expand(const PermutationGroup& g, std::span<const PointSet> base_blocks);

struct VerifyReport {
  bool ok = false;
  /// The common count when ok, else the count of the first t-subset.
  std::uint64_t lambda = 0;
  /// A t-subset whose count differs from that of the first t-subset.
  std::optional<PointSet> witness;
  std::uint64_t witness_count = 0;
};

/// Counts, for every t-subset, the blocks containing it. Throws InputError
/// unless 0 <= t <= k.
VerifyReport verify(const Design& d, int t, int workers = 1);

/// Union of the column orbits selected by x.
Design solution_to_design(const KmMatrix& a, const Solution& x, const PermutationGroup& g);

/// All k-subsets not in d. Throws LimitError when C(v, k) exceeds the guard.
Design supplement(const Design& d, std::uint64_t guard = 10'000'000);

/// Each block replaced by its complement in {1, ..., v}.
Design complement_design(const Design& d);

/// Throws DuplicateBlockError naming a shared block.
Design disjoint_union(const Design& a, const Design& b);

}  // namespace kmdesign
