#include "kmdesign/km_matrix.hpp"

#include <unordered_map>

#include "kmdesign/combinatorics.hpp"
#include "kmdesign/error.hpp"

namespace kmdesign {

KmMatrix::KmMatrix(int t, int v, int k, std::vector<OrbitMeta> rows, std::vector<OrbitMeta> cols,
                   std::vector<std::uint32_t> entries, bool complete_columns)
    : t_(t), v_(v), k_(k), rows_(std::move(rows)), cols_(std::move(cols)), entries_(std::move(entries)),
      complete_columns_(complete_columns) {
  if (entries_.size() != rows_.size() * cols_.size()) {
    throw InputError("matrix has " + std::to_string(entries_.size()) + " entries, expected " +
                     std::to_string(rows_.size()) + " x " + std::to_string(cols_.size()));
  }
}

std::uint64_t KmMatrix::row_sum(std::size_t i) const {
  std::uint64_t sum = 0;
  for (std::uint32_t x : row(i)) sum += x;
  return sum;
}

KmMatrix KmMatrix::with_column_order(std::span<const std::size_t> order) const {
  if (order.size() != cols_.size()) throw InputError("column order has the wrong length");
  std::vector<OrbitMeta> cols;
  std::vector<std::uint32_t> entries(entries_.size());
  for (std::size_t j = 0; j < order.size(); ++j) {
    if (order[j] >= cols_.size()) throw InputError("column index out of range");
    cols.push_back(cols_[order[j]]);
    for (std::size_t i = 0; i < rows_.size(); ++i) entries[i * order.size() + j] = at(i, order[j]);
  }
  return KmMatrix(t_, v_, k_, rows_, std::move(cols), std::move(entries), complete_columns_);
}

KmMatrix build_matrix(const PermutationGroup& g, int t, const OrbitSet& k_orbits, const OrbitSet& t_orbits) {
  const int v = g.degree();
  const int k = k_orbits.subset_size;
  if (t_orbits.subset_size != t) throw InputError("row orbits are not orbits of " + std::to_string(t) + "-subsets");
  if (!(0 <= t && t < k && k <= v)) {
    throw InputError("need 0 <= t < k <= v, got t=" + std::to_string(t) + " k=" + std::to_string(k) +
                     " v=" + std::to_string(v));
  }
  if (!t_orbits.complete) throw InputError("row orbits must be a complete enumeration");
  if (k_orbits.degree != v || t_orbits.degree != v) throw InputError("orbit degree differs from group degree");

  // Every t-subset mapped to its row.
  std::unordered_map<PointSet, std::size_t> row_of;
  for (std::size_t i = 0; i < t_orbits.orbits.size(); ++i) {
    const PointSet rep = t_orbits.orbits[i].representative;
    for (const auto& p : g.elements()) row_of.emplace(p.apply_unchecked(rep), i);
  }

  const std::size_t m = t_orbits.orbits.size();
  const std::size_t n = k_orbits.orbits.size();
  std::vector<std::uint32_t> entries(m * n, 0);
  std::vector<std::uint64_t> b(m);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(b.begin(), b.end(), 0);
    for_each_subset_of(k_orbits.orbits[j].representative, t, [&](PointSet ts) {
      const auto it = row_of.find(ts);
      if (it == row_of.end()) throw InternalError("t-subset " + ts.to_string() + " lies in no row orbit");
      ++b[it->second];
    });
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint64_t num = b[i] * k_orbits.orbits[j].size;
      const std::uint64_t den = t_orbits.orbits[i].size;
      if (num % den != 0) {
        throw InternalError("double counting fails at row " + std::to_string(i) + ", column " +
                            std::to_string(j) + ": " + std::to_string(num) + " not divisible by " +
                            std::to_string(den));
      }
      if (num / den > UINT32_MAX) throw LimitError("matrix entry exceeds 32 bits");
      entries[i * n + j] = static_cast<std::uint32_t>(num / den);
    }
  }

  std::vector<OrbitMeta> rows;
  std::vector<OrbitMeta> cols;
  for (const auto& o : t_orbits.orbits) rows.push_back({o.representative, o.size});
  for (const auto& o : k_orbits.orbits) cols.push_back({o.representative, o.size});
  return KmMatrix(t, v, k, std::move(rows), std::move(cols), std::move(entries), k_orbits.complete);
}

std::vector<std::uint64_t> row_residual_bound(const KmMatrix& a, std::span<const std::size_t> columns) {
  std::vector<std::uint64_t> out(a.num_rows(), 0);
  for (std::size_t j : columns) {
    if (j >= a.num_cols()) throw InputError("column index " + std::to_string(j) + " out of range");
    for (std::size_t i = 0; i < a.num_rows(); ++i) out[i] += a.at(i, j);
  }
  return out;
}

std::vector<LinearConstraint> implied_constraints(const PermutationGroup& g, const KmMatrix& a, std::uint64_t lambda) {
  OrbitSet cols;
  cols.degree = a.v();
  cols.subset_size = a.k();
  cols.group_order = g.order();
  cols.complete = a.complete_columns();
  for (const auto& c : a.cols()) cols.orbits.push_back({c.representative, c.size, g.order() / c.size});

  std::vector<LinearConstraint> out;
  for (int s = 0; s < a.t(); ++s) {
    const Fraction ls = Fraction::make(static_cast<unsigned __int128>(lambda) * binomial(a.v() - s, a.t() - s),
                                       binomial(a.k() - s, a.t() - s));
    if (!ls.is_integer()) return {LinearConstraint{std::vector<std::uint64_t>(a.num_cols(), 0), 1}};
    const KmMatrix level = build_matrix(g, s, cols, enumerate_orbits(g, s));
    for (std::size_t i = 0; i < level.num_rows(); ++i) {
      const auto row = level.row(i);
      out.push_back({std::vector<std::uint64_t>(row.begin(), row.end()), ls.num});
    }
  }
  return out;
}

}  // namespace kmdesign
