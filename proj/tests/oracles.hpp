#pragma once

// Slow, obviously-correct reference computations. They share no code with
// the library beyond the data types.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "kmdesign/group.hpp"
#include "kmdesign/io.hpp"
#include "kmdesign/km_matrix.hpp"

namespace oracle {

inline std::string fixture(const std::string& name) { return std::string(KM_FIXTURES) + "/" + name; }

inline kmdesign::PermutationGroup group(const std::string& name) {
  return kmdesign::generate_group(kmdesign::io::load_group(fixture(name + ".grp")).generators);
}

// Pascal's triangle.
inline std::uint64_t binom(int n, int r) {
  if (r < 0 || n < 0 || r > n) return 0;
  std::vector<std::uint64_t> row(static_cast<std::size_t>(r) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = std::min(i, r); j > 0; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
  }
  return row[static_cast<std::size_t>(r)];
}

inline std::vector<int> sorted_points(std::uint64_t mask) {
  std::vector<int> out;
  for (int i = 0; i < 64; ++i) {
    if ((mask >> i) & 1U) out.push_back(i + 1);
  }
  return out;
}

// Image of a subset computed pointwise from images().
inline std::uint64_t image(const kmdesign::Permutation& p, std::uint64_t mask) {
  const auto img = p.images();
  std::uint64_t out = 0;
  for (int x : sorted_points(mask)) out |= std::uint64_t{1} << (img[static_cast<std::size_t>(x - 1)] - 1);
  return out;
}

// Every image of the subset under the group.
inline std::set<std::vector<int>> orbit_images(const kmdesign::PermutationGroup& g, std::uint64_t mask) {
  std::set<std::vector<int>> out;
  for (const auto& p : g.elements()) out.insert(sorted_points(image(p, mask)));
  return out;
}

// All k-subsets of {1..v} as masks, by recursion.
inline void all_subsets(int v, int k, int from, std::uint64_t acc, std::vector<std::uint64_t>& out) {
  if (k == 0) {
    out.push_back(acc);
    return;
  }
  for (int x = from; x <= v - k + 1; ++x) all_subsets(v, k - 1, x + 1, acc | (std::uint64_t{1} << (x - 1)), out);
}

inline std::vector<std::uint64_t> all_subsets(int v, int k) {
  std::vector<std::uint64_t> out;
  all_subsets(v, k, 1, 0, out);
  return out;
}

struct Orbit {
  std::vector<int> representative;
  std::uint64_t size;
  friend bool operator==(const Orbit&, const Orbit&) = default;
};

// Orbits by explicit image sets; representatives are the std::vector
// minimum, which is the lexicographic order on sorted point lists.
inline std::vector<Orbit> orbits(const kmdesign::PermutationGroup& g, int k) {
  std::set<std::vector<int>> seen;
  std::vector<Orbit> out;
  for (std::uint64_t s : all_subsets(g.degree(), k)) {
    if (seen.contains(sorted_points(s))) continue;
    const auto imgs = orbit_images(g, s);
    seen.insert(imgs.begin(), imgs.end());
    out.push_back({*imgs.begin(), imgs.size()});
  }
  std::sort(out.begin(), out.end(), [](const Orbit& a, const Orbit& b) { return a.representative < b.representative; });
  return out;
}

// a_ij by expanding the whole column orbit and counting supersets of the
// row representative.
inline std::uint64_t km_entry(const kmdesign::PermutationGroup& g, std::uint64_t row_rep, std::uint64_t col_rep) {
  std::set<std::uint64_t> imgs;
  for (const auto& p : g.elements()) imgs.insert(image(p, col_rep));
  std::uint64_t n = 0;
  for (std::uint64_t s : imgs) n += (row_rep & ~s) == 0 ? 1 : 0;
  return n;
}

// Number of 0-1 vectors x with A x = lambda j, by scanning all 2^n.
inline std::uint64_t count_solutions(const std::vector<std::vector<std::uint32_t>>& rows, std::size_t n, std::uint64_t lambda) {
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    bool ok = true;
    for (const auto& row : rows) {
      std::uint64_t sum = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if ((x >> j) & 1U) sum += row[j];
      }
      if (sum != lambda) {
        ok = false;
        break;
      }
    }
    count += ok ? 1 : 0;
  }
  return count;
}

// lambda of a block list at strength t, tallying the t-subsets of each
// block; -1 when some t-subset count differs.
inline std::int64_t design_lambda(int v, const std::vector<std::uint64_t>& blocks, int t) {
  std::map<std::vector<int>, std::int64_t> tally;
  for (std::uint64_t s : all_subsets(v, t)) tally[sorted_points(s)] = 0;
  for (std::uint64_t b : blocks) {
    const auto pts = sorted_points(b);
    for (std::uint64_t local : all_subsets(static_cast<int>(pts.size()), t)) {
      std::vector<int> sub;
      for (int i : sorted_points(local)) sub.push_back(pts[static_cast<std::size_t>(i - 1)]);
      ++tally[sub];
    }
  }
  std::set<std::int64_t> values;
  for (const auto& [s, c] : tally) values.insert(c);
  return values.size() == 1 ? *values.begin() : -1;
}

}  // namespace oracle
