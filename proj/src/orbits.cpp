#include "kmdesign/orbits.hpp"

#include <algorithm>
#include <map>
#include <atomic>
#include <thread>
#include <unordered_set>

#include "kmdesign/combinatorics.hpp"
#include "kmdesign/error.hpp"

namespace kmdesign {

namespace {

void check_subset_size(const PermutationGroup& g, int k) {
  if (k < 0 || k > g.degree()) {
    throw InputError("subset size " + std::to_string(k) + " outside [0, " + std::to_string(g.degree()) + "]");
  }
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// True if some group element maps s to a lexicographically smaller set.
bool has_smaller_image(PointSet s, const PermutationGroup& g) {
  for (const auto& p : g.elements()) {
    if (p.apply_unchecked(s) < s) return true;
  }
  return false;
}

// Orbit data for s when s is already known to be lex-least in its orbit.
SubsetOrbit orbit_of_representative(PointSet s, const PermutationGroup& g) {
  std::uint64_t fixers = 0;
  for (const auto& p : g.elements()) {
    if (p.apply_unchecked(s) == s) ++fixers;
  }
  return {s, g.order() / fixers, fixers};
}

void sort_orbits(std::vector<SubsetOrbit>& orbits) {
  std::sort(orbits.begin(), orbits.end(),
            [](const SubsetOrbit& a, const SubsetOrbit& b) { return a.representative < b.representative; });
}

// Calls f(subset) for each union of cycles (given as masks with lengths)
// whose total length is k.
template <typename F>
void for_each_cycle_union(const std::vector<std::pair<std::uint64_t, int>>& cycles, std::size_t from,
                          int remaining, std::uint64_t acc, F& f) {
  if (remaining == 0) {
    f(PointSet(acc));
    return;
  }
  for (std::size_t i = from; i < cycles.size(); ++i) {
    if (cycles[i].second <= remaining) {
      for_each_cycle_union(cycles, i + 1, remaining - cycles[i].second, acc | cycles[i].first, f);
    }
  }
}

}  // namespace

PointSet lex_min_image(PointSet s, const PermutationGroup& g) {
  if (s.max_point() > g.degree()) {
    throw InputError("subset " + s.to_string() + " has points beyond degree " + std::to_string(g.degree()));
  }
  PointSet best = s;
  for (const auto& p : g.elements()) {
    const PointSet img = p.apply_unchecked(s);
    if (img < best) best = img;
  }
  return best;
}

SubsetOrbit orbit_of(PointSet s, const PermutationGroup& g) {
  return orbit_of_representative(lex_min_image(s, g), g);
}

OrbitSet enumerate_orbits(const PermutationGroup& g, int k, const OrbitOptions& options) {
  check_subset_size(g, k);
  const std::uint64_t total = binomial(g.degree(), k);
  if (total > options.subset_guard) {
    throw LimitError("C(" + std::to_string(g.degree()) + ", " + std::to_string(k) + ") = " +
                     std::to_string(total) + " subsets exceeds the enumeration guard of " +
                     std::to_string(options.subset_guard) + "; use short-orbit enumeration");
  }

  const int workers = std::max(1, options.workers);
  std::vector<std::vector<SubsetOrbit>> partial(static_cast<std::size_t>(workers));
  auto work = [&](int w) {
    std::uint64_t counter = 0;
    for_each_k_subset(g.degree(), k, [&](PointSet s) {
      if (counter++ % static_cast<std::uint64_t>(workers) != static_cast<std::uint64_t>(w)) return;
      if (!has_smaller_image(s, g)) partial[static_cast<std::size_t>(w)].push_back(orbit_of_representative(s, g));
    });
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
  }

  OrbitSet out;
  out.degree = g.degree();
  out.subset_size = k;
  out.group_order = g.order();
  out.complete = true;
  for (auto& part : partial) out.orbits.insert(out.orbits.end(), part.begin(), part.end());
  sort_orbits(out.orbits);
  return out;
}

std::vector<std::size_t> prime_order_class_representatives(const PermutationGroup& g) {
  const std::size_t n = g.order();
  std::vector<bool> covered(n, false);
  std::vector<std::size_t> reps;
  std::vector<Permutation> inverses;
  inverses.reserve(n);
  for (const auto& p : g.elements()) inverses.push_back(p.inverse());

  for (std::size_t i = 0; i < n; ++i) {
    if (covered[i] || !is_prime(g.element(i).order())) continue;
    reps.push_back(i);
    // Mark every element of every conjugate of <g_i>.
    for (std::size_t h = 0; h < n; ++h) {
      const Permutation conj = compose(compose(g.element(h), g.element(i)), inverses[h]);
      Permutation power = conj;
      while (!power.is_identity()) {
        const auto idx = g.index_of(power);
        if (!idx) throw InternalError("group element list is not closed under conjugation");
        covered[*idx] = true;
        power = compose(power, conj);
      }
    }
  }
  return reps;
}

OrbitSet enumerate_short_orbits(const PermutationGroup& g, int k, std::uint64_t bound,
                                const OrbitOptions& options) {
  check_subset_size(g, k);
  if (bound >= g.order()) {
    throw InputError("short-orbit bound " + std::to_string(bound) + " must be below the group order " +
                     std::to_string(g.order()) + "; use complete enumeration");
  }

  const std::vector<std::size_t> reps = prime_order_class_representatives(g);
  const int workers = std::max(1, options.workers);
  std::vector<std::vector<SubsetOrbit>> found(reps.size());

  auto process = [&](std::size_t r) {
    const Permutation& gen = g.element(reps[r]);
    std::vector<std::pair<std::uint64_t, int>> cycles;
    for (int p = 1; p <= g.degree(); ++p) {
      if (gen(p) == p) cycles.emplace_back(std::uint64_t{1} << (p - 1), 1);
    }
    for (const auto& c : gen.cycles()) {
      std::uint64_t mask = 0;
      for (int p : c) mask |= std::uint64_t{1} << (p - 1);
      cycles.emplace_back(mask, static_cast<int>(c.size()));
    }

    // Candidates already seen as images of an earlier candidate's orbit.
    std::unordered_set<PointSet> seen;
    auto& out = found[r];
    auto visit = [&](PointSet s) {
      if (seen.contains(s)) return;
      PointSet best = s;
      std::uint64_t fixers = 0;
      for (const auto& p : g.elements()) {
        const PointSet img = p.apply_unchecked(s);
        if (img == s) ++fixers;
        if (img < best) best = img;
        if (gen.apply_unchecked(img) == img) seen.insert(img);
      }
      const std::uint64_t size = g.order() / fixers;
      if (size <= bound) out.push_back({best, size, fixers});
    };
    for_each_cycle_union(cycles, 0, k, 0, visit);
  };

  if (workers == 1) {
    for (std::size_t r = 0; r < reps.size(); ++r) process(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> threads;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        for (std::size_t r = next++; r < reps.size(); r = next++) process(r);
      });
    }
  }

  std::map<PointSet, SubsetOrbit> unique;
  for (const auto& list : found) {
    for (const auto& o : list) unique.emplace(o.representative, o);
  }

  OrbitSet out;
  out.degree = g.degree();
  out.subset_size = k;
  out.group_order = g.order();
  out.complete = false;
  out.size_bound = bound;
  for (auto& [rep, orbit] : unique) out.orbits.push_back(orbit);
  return out;
}

}  // namespace kmdesign
