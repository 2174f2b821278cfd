#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "kmdesign/km_matrix.hpp"

namespace kmdesign {

enum class SolveMode { kFirst, kEnumerate, kCount };
enum class SolveStatus { kComplete, kIncomplete };
enum class BranchOrder { kIncludeFirst, kExcludeFirst };

struct SolveRequest {
  std::uint64_t lambda = 0;
  SolveMode mode = SolveMode::kEnumerate;
  std::optional<std::uint64_t> solution_limit;
  std::optional<std::chrono::duration<double>> time_budget;
  int workers = 1;
  BranchOrder branch_order = BranchOrder::kIncludeFirst;
  /// Equations every solution satisfies anyway (see implied_constraints);
  /// they only prune. Wrong ones lose solutions.
  std::vector<LinearConstraint> implied;
};

/// Selected column indices, ascending.
struct Solution {
  std::vector<std::size_t> columns;

  friend bool operator==(const Solution&, const Solution&) = default;
  friend auto operator<=>(const Solution&, const Solution&) = default;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kComplete;
  /// Solutions found. Exact when status is complete and the limit was not hit.
  std::uint64_t count = 0;
  bool limit_reached = false;
  /// Lexicographically sorted. Left empty in count mode.
  std::vector<Solution> solutions;
  std::uint64_t nodes = 0;
};

/// Finds 0-1 vectors x with A x = lambda * (1, ..., 1).
///
/// Depth-first search over columns with residuals r_i = lambda - sum of the
/// chosen a_ij. A node is pruned when some r_i is negative or exceeds what
/// the still-open columns can add to row i. Columns that no longer fit are
/// closed, and a row whose residual equals its remaining capacity forces
/// all of its open columns in, and each row keeps only the columns that can
/// still appear in some subset sum hitting its residual. At the fixpoint the
/// real relaxation (0 <= x <= 1) is tried: a row of its reduced echelon form
/// may force a column, and an infeasible LP prunes the node. Both verdicts
/// are checked against an aggregated equation of the original rows before
/// they are used. Branching picks the unsatisfied row with the least slack
/// and splits on its open column with the largest entry.
///
/// The tree is cut into a fixed frontier of subproblems before any worker
/// starts, so results do not depend on the worker count.
SolveResult solve(const KmMatrix& a, const SolveRequest& request);

/// Independent check that x solves A x = lambda j.
bool is_solution(const KmMatrix& a, const Solution& x, std::uint64_t lambda);

}  // namespace kmdesign
