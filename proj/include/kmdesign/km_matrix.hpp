#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kmdesign/group.hpp"
#include "kmdesign/orbits.hpp"

namespace kmdesign {

/// Row or column label of a Kramer-Mesner matrix.
struct OrbitMeta {
  PointSet representative;
  std::uint64_t size = 0;

  friend bool operator==(const OrbitMeta&, const OrbitMeta&) = default;
};

/// The Kramer-Mesner matrix: entry (i, j) counts the k-subsets of column
/// orbit j that contain one fixed t-subset of row orbit i.
class KmMatrix {
 public:
  KmMatrix() = default;
  /// Entries row-major, rows.size() x cols.size(). Throws InputError on a
  /// shape mismatch.
  KmMatrix(int t, int v, int k, std::vector<OrbitMeta> rows, std::vector<OrbitMeta> cols,
           std::vector<std::uint32_t> entries, bool complete_columns);

  int t() const { return t_; }
  int v() const { return v_; }
  int k() const { return k_; }
  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_cols() const { return cols_.size(); }
  const std::vector<OrbitMeta>& rows() const { return rows_; }
  const std::vector<OrbitMeta>& cols() const { return cols_; }
  bool complete_columns() const { return complete_columns_; }

  std::uint32_t at(std::size_t row, std::size_t col) const { return entries_[row * cols_.size() + col]; }
  std::span<const std::uint32_t> row(std::size_t i) const {
    return std::span<const std::uint32_t>(entries_).subspan(i * cols_.size(), cols_.size());
  }
  const std::vector<std::uint32_t>& entries() const { return entries_; }
  std::uint64_t row_sum(std::size_t i) const;

  /// Same matrix with columns reordered: column j of the result is column
  /// order[j] of this one.
  KmMatrix with_column_order(std::span<const std::size_t> order) const;

  friend bool operator==(const KmMatrix&, const KmMatrix&) = default;

 private:
  int t_ = 0;
  int v_ = 0;
  int k_ = 0;
  std::vector<OrbitMeta> rows_;
  std::vector<OrbitMeta> cols_;
  std::vector<std::uint32_t> entries_;
  bool complete_columns_ = false;
};

/// Builds the matrix from column representatives: the t-subsets of each
/// column representative are classified into row orbits (b_ij), and
/// a_ij = b_ij * |K_j| / |T_i|. A non-exact division throws InternalError.
KmMatrix build_matrix(const PermutationGroup& g, int t, const OrbitSet& k_orbits, const OrbitSet& t_orbits);

/// sum_j weights[j] * x_j == target.
struct LinearConstraint {
  std::vector<std::uint64_t> weights;
  std::uint64_t target = 0;

  friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

/// Equations every solution of A x = lambda j also satisfies: a t-design is
/// an s-design for each s < t, so the matrices of s-orbits against the same
/// columns must sum to lambda_s. Level 0 is the block count. A level whose
/// lambda_s is not an integer yields an unsatisfiable equation.
std::vector<LinearConstraint> implied_constraints(const PermutationGroup& g, const KmMatrix& a, std::uint64_t lambda);

/// For each row, the sum of its entries over the given columns.
std::vector<std::uint64_t> row_residual_bound(const KmMatrix& a, std::span<const std::size_t> columns);

}  // namespace kmdesign
