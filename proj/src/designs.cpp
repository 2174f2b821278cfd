#include "kmdesign/designs.hpp"

#include <algorithm>
#include <numeric>
#include <thread>
#include <unordered_map>

namespace kmdesign {

DesignParameters parameters(int t, int v, int k, std::uint64_t lambda) {
  if (!(0 < t && t < k && k < v)) {
    throw InputError("need 0 < t < k < v, got t=" + std::to_string(t) + " k=" + std::to_string(k) +
                     " v=" + std::to_string(v));
  }
  if (v > kMaxPoints) throw InputError("v=" + std::to_string(v) + " exceeds " + std::to_string(kMaxPoints));
  DesignParameters p;
  p.t = t;
  p.v = v;
  p.k = k;
  p.lambda = lambda;
  p.admissible = true;
  std::uint64_t lmin = 1;
  for (int s = 0; s <= t; ++s) {
    const std::uint64_t num = binomial(v - s, t - s);
    const std::uint64_t den = binomial(k - s, t - s);
    p.lambda_s.push_back(Fraction::make(static_cast<unsigned __int128>(lambda) * num, den));
    if (!p.lambda_s.back().is_integer()) p.admissible = false;
    const std::uint64_t step = den / std::gcd(num, den);
    lmin = std::lcm(lmin, step);
  }
  p.lambda_min = lmin;
  p.lambda_max = binomial(v - t, k - t);
  p.m = p.lambda_max / (2 * p.lambda_min);
  if (p.lambda_s[0].is_integer()) p.b = p.lambda_s[0].num;
  // Every t-design with t >= 2 is a 2-design, so Fisher's bound b >= v applies.
  if (t >= 2 && lambda > 0) {
    p.fisher_ok = static_cast<unsigned __int128>(p.lambda_s[0].num) >=
                  static_cast<unsigned __int128>(v) * p.lambda_s[0].den;
  }
  return p;
}

std::int64_t complement_lambda(const DesignParameters& p) {
  if (!p.admissible) throw InputError("complement lambda needs admissible parameters");
  __int128 sum = 0;
  for (int i = 0; i <= p.t; ++i) {
    const __int128 term = static_cast<__int128>(binomial(p.t, i)) * p.lambda_s[static_cast<std::size_t>(i)].num;
    sum += (i % 2 == 0) ? term : -term;
  }
  return static_cast<std::int64_t>(sum);
}

Design::Design(int v, int k, std::vector<PointSet> blocks) : v_(v), k_(k), blocks_(std::move(blocks)) {
  if (v < 1 || v > kMaxPoints) throw InputError("design point count " + std::to_string(v) + " out of range");
  if (k < 0 || k > v) throw InputError("block size " + std::to_string(k) + " out of range");
  const PointSet all = PointSet::full(v);
  for (PointSet b : blocks_) {
    if (b.size() != k) throw InputError("block " + b.to_string() + " does not have " + std::to_string(k) + " points");
    if (!b.is_subset_of(all)) throw InputError("block " + b.to_string() + " has a point beyond " + std::to_string(v));
  }
  std::sort(blocks_.begin(), blocks_.end());
  const auto dup = std::adjacent_find(blocks_.begin(), blocks_.end());
  if (dup != blocks_.end()) throw DuplicateBlockError("repeated block " + dup->to_string(), *dup);
}

bool Design::contains(PointSet block) const { return std::binary_search(blocks_.begin(), blocks_.end(), block); }

Design expand(const PermutationGroup& g, std::span<const PointSet> base_blocks) {
  if (base_blocks.empty()) throw InputError("no base blocks");
  const int k = base_blocks.front().size();
  const PointSet all = PointSet::full(g.degree());
  std::unordered_map<PointSet, std::size_t> owner;
  std::vector<PointSet> blocks;
  for (std::size_t i = 0; i < base_blocks.size(); ++i) {
    const PointSet base = base_blocks[i];
    if (base.size() != k) throw InputError("base block " + base.to_string() + " has the wrong size");
    if (!base.is_subset_of(all)) throw InputError("base block " + base.to_string() + " exceeds the group degree");
    for (const auto& p : g.elements()) {
      const PointSet img = p.apply_unchecked(base);
      const auto [it, fresh] = owner.emplace(img, i);
      if (fresh) {
        blocks.push_back(img);
      } else if (it->second != i) {
        throw DuplicateBlockError("base blocks " + base_blocks[it->second].to_string() + " and " + base.to_string() +
                                      " share the block " + img.to_string(),
                                  img);
      }
    }
  }
  return Design(g.degree(), k, std::move(blocks));
}

VerifyReport verify(const Design& d, int t, int workers) {
  if (t < 0 || t > d.k()) throw InputError("verify needs 0 <= t <= k, got t=" + std::to_string(t));
  const auto& blocks = d.blocks();
  auto count = [&](PointSet s) {
    std::uint64_t c = 0;
    for (PointSet b : blocks) c += s.is_subset_of(b) ? 1 : 0;
    return c;
  };
  VerifyReport report;
  std::uint64_t first_count = 0;
  for_each_k_subset(d.v(), t, [&](PointSet s) {
    first_count = count(s);
    return false;
  });

  // Each worker scans every workers-th t-subset and keeps its first deviant.
  workers = std::max(1, workers);
  std::vector<std::optional<std::pair<PointSet, std::uint64_t>>> deviant(static_cast<std::size_t>(workers));
  auto scan = [&](int w) {
    std::uint64_t idx = 0;
    for_each_k_subset(d.v(), t, [&](PointSet s) {
      if (idx++ % static_cast<std::uint64_t>(workers) != static_cast<std::uint64_t>(w)) return true;
      const std::uint64_t c = count(s);
      if (c == first_count) return true;
      deviant[static_cast<std::size_t>(w)] = {s, c};
      return false;
    });
  };
  if (workers == 1) {
    scan(0);
  } else {
    std::vector<std::jthread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(scan, w);
  }

  report.lambda = first_count;
  for (const auto& dev : deviant) {
    if (dev && (!report.witness || dev->first < *report.witness)) {
      report.witness = dev->first;
      report.witness_count = dev->second;
    }
  }
  report.ok = !report.witness;
  return report;
}

Design solution_to_design(const KmMatrix& a, const Solution& x, const PermutationGroup& g) {
  if (g.degree() != a.v()) throw InputError("group degree differs from the matrix point count");
  if (x.columns.empty()) return Design(a.v(), a.k(), {});
  std::vector<PointSet> reps;
  for (std::size_t j : x.columns) {
    if (j >= a.num_cols()) throw InputError("solution column " + std::to_string(j) + " out of range");
    reps.push_back(a.cols()[j].representative);
  }
  return expand(g, reps);
}

Design supplement(const Design& d, std::uint64_t guard) {
  if (binomial(d.v(), d.k()) > guard) {
    throw LimitError("supplement would list C(" + std::to_string(d.v()) + "," + std::to_string(d.k()) +
                     ") blocks, above the guard of " + std::to_string(guard));
  }
  std::vector<PointSet> out;
  for_each_k_subset(d.v(), d.k(), [&](PointSet s) {
    if (!d.contains(s)) out.push_back(s);
  });
  return Design(d.v(), d.k(), std::move(out));
}

Design complement_design(const Design& d) {
  const std::uint64_t all = PointSet::full(d.v()).mask();
  std::vector<PointSet> out;
  out.reserve(d.b());
  for (PointSet b : d.blocks()) out.emplace_back(all & ~b.mask());
  return Design(d.v(), d.v() - d.k(), std::move(out));
}

Design disjoint_union(const Design& a, const Design& b) {
  if (a.v() != b.v() || a.k() != b.k()) throw InputError("union needs designs with equal v and k");
  std::vector<PointSet> out = a.blocks();
  for (PointSet blk : b.blocks()) {
    if (a.contains(blk)) throw DuplicateBlockError("designs share the block " + blk.to_string(), blk);
    out.push_back(blk);
  }
  return Design(a.v(), a.k(), std::move(out));
}

}  // namespace kmdesign
