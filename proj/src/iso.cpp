#include "kmdesign/iso.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace kmdesign {

namespace {

// Per-block counts of other blocks meeting it in 0..k points.
std::vector<std::vector<std::uint32_t>> block_profiles(const Design& d) {
  const auto& blocks = d.blocks();
  std::vector<std::vector<std::uint32_t>> prof(blocks.size(), std::vector<std::uint32_t>(static_cast<std::size_t>(d.k()) + 1, 0));
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      const auto c = static_cast<std::size_t>(std::popcount(blocks[i].mask() & blocks[j].mask()));
      ++prof[i][c];
      ++prof[j][c];
    }
  }
  return prof;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h = (h ^ (h >> 31)) * 0xbf58476d1ce4e5b9ULL;
  return h ^ (h >> 29);
}

std::uint64_t scramble(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Replaces each signature by its rank among the distinct signatures and
// folds the sorted distinct list (with multiplicities) into the trace.
std::size_t relabel(const std::vector<std::uint64_t>& sig, std::vector<std::uint32_t>& color, std::uint64_t& trace) {
  std::vector<std::uint64_t> sorted = sig;
  std::sort(sorted.begin(), sorted.end());
  std::size_t distinct = 0;
  for (std::size_t r = 0; r < sorted.size();) {
    std::size_t e = r;
    while (e < sorted.size() && sorted[e] == sorted[r]) ++e;
    trace = mix(mix(trace, sorted[r]), e - r);
    sorted[distinct++] = sorted[r];
    r = e;
  }
  sorted.resize(distinct);
  for (std::size_t i = 0; i < sig.size(); ++i) {
    color[i] = static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), sig[i]) - sorted.begin());
  }
  return distinct;
}

struct Coloring {
  std::vector<std::uint32_t> point;
  std::size_t cells = 0;
  std::uint64_t trace = 0;
};

// Point-block incidence structure of one design.
class Incidence {
 public:
  explicit Incidence(const Design& d) : d_(d) {
    const auto prof = block_profiles(d);
    std::vector<std::uint64_t> sig(d.b());
    for (std::size_t j = 0; j < d.b(); ++j) {
      std::uint64_t h = 0;
      for (std::uint32_t c : prof[j]) h = mix(h, c);
      sig[j] = h;
    }
    block_init_.resize(d.b());
    std::uint64_t ignored = 0;
    relabel(sig, block_init_, ignored);
    point_blocks_.resize(static_cast<std::size_t>(d.v()));
    for (std::size_t j = 0; j < d.b(); ++j) {
      d.blocks()[j].for_each([&](int x) { point_blocks_[static_cast<std::size_t>(x - 1)].push_back(static_cast<std::uint32_t>(j)); });
    }
  }

  const Design& design() const { return d_; }
  int v() const { return d_.v(); }

  // Colour refinement of points and blocks until the point partition is
  // stable. The result depends only on the input colouring up to relabeling.
  Coloring refine(const std::vector<std::uint32_t>& start) const {
    const std::size_t v = point_blocks_.size();
    const std::size_t b = d_.b();
    Coloring out;
    out.point.assign(v, 0);
    // A multiset of colours hashes to the sum of scrambled members, so no
    // sorting is needed; a collision only merges cells.
    std::vector<std::uint64_t> psig(v), bsig(b), pair_sum(v);
    for (std::size_t x = 0; x < v; ++x) psig[x] = start[x];
    std::size_t cells = relabel(psig, out.point, out.trace);
    std::vector<std::uint32_t> bcol = block_init_;
    std::size_t bcells = 0;
    while (true) {
      for (std::size_t j = 0; j < b; ++j) {
        std::uint64_t sum = 0;
        d_.blocks()[j].for_each([&](int x) { sum += scramble(out.point[static_cast<std::size_t>(x - 1)] + 1); });
        bsig[j] = mix(bcol[j], sum);
      }
      const std::size_t nb = relabel(bsig, bcol, out.trace);
      for (std::size_t x = 0; x < v; ++x) {
        std::uint64_t sum = 0;
        for (std::uint32_t j : point_blocks_[x]) sum += scramble(bcol[j] + 0x51ed27ULL);
        psig[x] = mix(out.point[x], sum);
      }
      std::size_t np = relabel(psig, out.point, out.trace);
      if (np == cells && nb == bcells) {
        // Stable under point-block counting; try the finer pair view: each
        // point sees every other point with the colours of their common blocks.
        for (std::size_t x = 0; x < v; ++x) {
          std::fill(pair_sum.begin(), pair_sum.end(), 0);
          for (std::uint32_t j : point_blocks_[x]) {
            const std::uint64_t h = scramble(bcol[j] + 0x2545f491ULL);
            d_.blocks()[j].for_each([&](int y) { pair_sum[static_cast<std::size_t>(y - 1)] += h; });
          }
          std::uint64_t sum = 0;
          for (std::size_t y = 0; y < v; ++y) {
            if (y != x) sum += scramble(mix(out.point[y], pair_sum[y]));
          }
          psig[x] = mix(out.point[x], sum);
        }
        np = relabel(psig, out.point, out.trace);
        if (np == cells) break;
      }
      cells = np;
      bcells = nb;
    }
    out.cells = cells;
    return out;
  }

 private:
  const Design& d_;
  std::vector<std::uint32_t> block_init_;
  std::vector<std::vector<std::uint32_t>> point_blocks_;
};

// x keeps its colour ahead of the rest of its cell.
std::vector<std::uint32_t> individualize(const Coloring& c, std::size_t x) {
  std::vector<std::uint32_t> out(c.point.size());
  for (std::size_t z = 0; z < out.size(); ++z) out[z] = 2 * c.point[z] + (z == x ? 0 : 1);
  return out;
}

std::vector<std::size_t> cell_sizes(const Coloring& c) {
  std::vector<std::size_t> sizes(c.cells, 0);
  for (std::uint32_t col : c.point) ++sizes[col];
  return sizes;
}

bool compatible(const Coloring& a, const Coloring& b) {
  return a.cells == b.cells && a.trace == b.trace && cell_sizes(a) == cell_sizes(b);
}

// Smallest non-singleton cell, lowest colour first.
std::optional<std::uint32_t> target_cell(const Coloring& c) {
  const auto sizes = cell_sizes(c);
  std::optional<std::uint32_t> best;
  for (std::uint32_t col = 0; col < sizes.size(); ++col) {
    if (sizes[col] > 1 && (!best || sizes[col] < sizes[*best])) best = col;
  }
  return best;
}

std::vector<std::size_t> members(const Coloring& c, std::uint32_t col) {
  std::vector<std::size_t> out;
  for (std::size_t z = 0; z < c.point.size(); ++z) {
    if (c.point[z] == col) out.push_back(z);
  }
  return out;
}

bool maps_blocks(const Permutation& p, const Design& a, const Design& b) {
  std::vector<PointSet> img;
  img.reserve(a.b());
  for (PointSet blk : a.blocks()) img.push_back(p.apply_unchecked(blk));
  std::sort(img.begin(), img.end());
  return img == b.blocks();
}

// Searches for a point map from A onto B. A follows one fixed path of
// individualizations (first point of the target cell); B tries every point
// of the matching cell.
class Matcher {
 public:
  Matcher(const Incidence& a, const Incidence& b, std::uint64_t budget, std::uint64_t& nodes)
      : a_(a), b_(b), budget_(budget), nodes_(nodes) {}

  // Both colourings must be compatible. Returns the map or nothing; sets
  // exhausted() when the budget stops the search.
  std::optional<Permutation> run(const Coloring& ca, const Coloring& cb) {
    path_.clear();
    path_.push_back(ca);
    return search(0, cb);
  }

  bool exhausted() const { return exhausted_; }

 private:
  std::optional<Permutation> search(std::size_t depth, const Coloring& cb) {
    if (exhausted_) return std::nullopt;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return std::nullopt;
    }
    const Coloring& ca = path_[depth];
    const auto cell = target_cell(ca);
    if (!cell) {
      std::vector<int> images(ca.point.size());
      std::vector<std::size_t> by_color(cb.point.size());
      for (std::size_t z = 0; z < cb.point.size(); ++z) by_color[cb.point[z]] = z;
      for (std::size_t z = 0; z < ca.point.size(); ++z) images[z] = static_cast<int>(by_color[ca.point[z]]) + 1;
      Permutation p = Permutation::from_images(images);
      if (maps_blocks(p, a_.design(), b_.design())) return p;
      return std::nullopt;
    }
    if (path_.size() == depth + 1) {
      const std::size_t x = members(ca, *cell).front();
      path_.push_back(a_.refine(individualize(ca, x)));
    }
    for (std::size_t y : members(cb, *cell)) {
      const Coloring next = b_.refine(individualize(cb, y));
      if (!compatible(path_[depth + 1], next)) continue;
      if (auto found = search(depth + 1, next)) return found;
      if (exhausted_) break;
    }
    return std::nullopt;
  }

  const Incidence& a_;
  const Incidence& b_;
  std::uint64_t budget_;
  std::uint64_t& nodes_;
  bool exhausted_ = false;
  std::vector<Coloring> path_;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }
  std::size_t size_of(std::size_t x) { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

Fingerprint fingerprint(const Design& d) {
  Fingerprint f;
  f.v = d.v();
  f.k = d.k();
  f.b = d.b();
  f.profiles = block_profiles(d);
  for (const auto& p : f.profiles) {
    for (std::size_t c = 0; c < p.size(); ++c) {
      if (p[c] != 0) f.intersection_histogram[static_cast<int>(c)] += p[c];
    }
  }
  for (auto& [c, n] : f.intersection_histogram) n /= 2;
  std::sort(f.profiles.begin(), f.profiles.end());
  return f;
}

IsoResult isomorphic(const Design& a, const Design& b, const IsoOptions& options) {
  IsoResult result;
  if (a.v() != b.v() || a.k() != b.k() || a.b() != b.b() || fingerprint(a) != fingerprint(b)) {
    result.status = IsoStatus::kNonIsomorphic;
    return result;
  }
  const Incidence ia(a), ib(b);
  const std::vector<std::uint32_t> zero(static_cast<std::size_t>(a.v()), 0);
  const Coloring ca = ia.refine(zero);
  const Coloring cb = ib.refine(zero);
  if (!compatible(ca, cb)) {
    result.status = IsoStatus::kNonIsomorphic;
    return result;
  }
  Matcher m(ia, ib, options.node_budget, result.nodes);
  result.witness = m.run(ca, cb);
  if (result.witness) {
    if (!maps_blocks(*result.witness, a, b)) throw InternalError("isomorphism witness does not map the blocks");
    result.status = IsoStatus::kIsomorphic;
  } else {
    result.status = m.exhausted() ? IsoStatus::kUnknown : IsoStatus::kNonIsomorphic;
  }
  return result;
}

std::optional<std::uint64_t> AutomorphismResult::order() const {
  std::uint64_t n = 1;
  for (std::uint64_t x : orbit_lengths) {
    if (__builtin_mul_overflow(n, x, &n)) return std::nullopt;
  }
  return n;
}

std::string AutomorphismResult::order_string() const {
  std::vector<int> digits{1};  // little-endian decimal
  for (std::uint64_t x : orbit_lengths) {
    unsigned __int128 carry = 0;
    for (int& dgt : digits) {
      const unsigned __int128 cur = static_cast<unsigned __int128>(dgt) * x + carry;
      dgt = static_cast<int>(cur % 10);
      carry = cur / 10;
    }
    while (carry != 0) {
      digits.push_back(static_cast<int>(carry % 10));
      carry /= 10;
    }
  }
  std::string s;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) s.push_back(static_cast<char>('0' + *it));
  return s;
}

AutomorphismResult automorphism_order(const Design& d, const IsoOptions& options) {
  AutomorphismResult result;
  const Incidence inc(d);
  const auto v = static_cast<std::size_t>(d.v());

  // Leftmost path: individualize the first point of the target cell until
  // the partition is discrete.
  std::vector<Coloring> path{inc.refine(std::vector<std::uint32_t>(v, 0))};
  std::vector<std::size_t> base;
  while (const auto cell = target_cell(path.back())) {
    base.push_back(members(path.back(), *cell).front());
    path.push_back(inc.refine(individualize(path.back(), base.back())));
  }

  // Deepest level first, so every generator found so far fixes the base
  // points above the current level.
  UnionFind orbits(v);
  result.orbit_lengths.assign(base.size(), 1);
  bool exhausted = false;
  for (std::size_t level = base.size(); level-- > 0 && !exhausted;) {
    const Coloring& here = path[level];
    const std::size_t x = base[level];
    for (std::size_t y : members(here, here.point[x])) {
      if (orbits.find(y) == orbits.find(x)) continue;
      const Coloring cy = inc.refine(individualize(here, y));
      if (!compatible(path[level + 1], cy)) continue;
      Matcher m(inc, inc, options.node_budget, result.nodes);
      const auto g = m.run(path[level + 1], cy);
      if (m.exhausted()) {
        exhausted = true;
        break;
      }
      if (!g) continue;
      result.generators.push_back(*g);
      for (std::size_t z = 0; z < v; ++z) orbits.unite(z, static_cast<std::size_t>((*g)(static_cast<int>(z) + 1) - 1));
    }
    result.orbit_lengths[level] = orbits.size_of(x);
  }
  if (exhausted) {
    // Orbits of the generators that fix the earlier base points still give a
    // lower bound on every level.
    for (std::size_t level = 0; level < base.size(); ++level) {
      UnionFind sub(v);
      for (const auto& g : result.generators) {
        bool fixes = true;
        for (std::size_t l = 0; l < level && fixes; ++l) fixes = g(static_cast<int>(base[l]) + 1) == static_cast<int>(base[l]) + 1;
        if (!fixes) continue;
        for (std::size_t z = 0; z < v; ++z) sub.unite(z, static_cast<std::size_t>(g(static_cast<int>(z) + 1) - 1));
      }
      result.orbit_lengths[level] = sub.size_of(base[level]);
    }
  }
  for (const auto& g : result.generators) {
    if (!maps_blocks(g, d, d)) throw InternalError("automorphism does not preserve the blocks");
  }
  result.complete = !exhausted;
  return result;
}

IsoClasses classify(const std::vector<Design>& designs, const IsoOptions& options) {
  IsoClasses out;
  std::vector<Fingerprint> prints;
  prints.reserve(designs.size());
  for (const auto& d : designs) prints.push_back(fingerprint(d));
  for (std::size_t i = 0; i < designs.size(); ++i) {
    bool placed = false;
    for (auto& cls : out.classes) {
      const std::size_t rep = cls.front();
      if (prints[rep] != prints[i]) continue;
      const IsoResult r = isomorphic(designs[rep], designs[i], options);
      if (r.status == IsoStatus::kUnknown) out.complete = false;
      if (r.status == IsoStatus::kIsomorphic) {
        cls.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) out.classes.push_back({i});
  }
  return out;
}

}  // namespace kmdesign
