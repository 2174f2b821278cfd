#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "kmdesign/iso.hpp"
#include "oracles.hpp"

using namespace kmdesign;

namespace {

Design relabel(const Design& d, const Permutation& p) {
  std::vector<PointSet> blocks;
  for (PointSet b : d.blocks()) blocks.push_back(PointSet(oracle::image(p, b.mask())));
  return Design(d.v(), d.k(), blocks);
}

Permutation random_permutation(int v, std::uint64_t seed) {
  std::vector<int> img(static_cast<std::size_t>(v));
  std::iota(img.begin(), img.end(), 1);
  std::shuffle(img.begin(), img.end(), std::mt19937_64(seed));
  return Permutation::from_images(img);
}

Design psl(const char* which) {
  const auto base = io::load_baseblocks(oracle::fixture(std::string("t_psl211_") + which + ".blk"));
  return expand(oracle::group("g_psl211"), base.blocks);
}

Design fano() {
  std::vector<PointSet> lines;
  for (auto l : {std::vector{1, 2, 3}, {1, 4, 5}, {1, 6, 7}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 5, 6}}) {
    lines.push_back(PointSet::from_points(l, 7));
  }
  return Design(7, 3, lines);
}

}  // namespace

TEST_CASE("fingerprint is a relabeling invariant") {
  const Design d = psl("a");
  const auto f = fingerprint(d);
  CHECK(f.b == 132);
  std::uint64_t pairs = 0;
  for (const auto& [size, n] : f.intersection_histogram) pairs += n;
  CHECK(pairs == 132 * 131 / 2);
  for (std::uint64_t seed : {1, 2, 3}) CHECK(fingerprint(relabel(d, random_permutation(55, seed))) == f);
}

TEST_CASE("relabeled copies are isomorphic, with a witness") {
  for (const Design& d : {fano(), psl("a"), psl("c")}) {
    const auto p = random_permutation(d.v(), 99);
    const Design e = relabel(d, p);
    const auto r = isomorphic(d, e);
    REQUIRE(r.status == IsoStatus::kIsomorphic);
    REQUIRE(r.witness.has_value());
    CHECK(relabel(d, *r.witness) == e);
  }
}

TEST_CASE("non-isomorphic designs") {
  const auto r = isomorphic(psl("a"), psl("b"));
  CHECK(r.status == IsoStatus::kNonIsomorphic);
  CHECK_FALSE(r.witness.has_value());
  // Different parameters fail on the fingerprint alone.
  CHECK(isomorphic(fano(), Design(7, 3, {})).status == IsoStatus::kNonIsomorphic);
}

TEST_CASE("automorphism orders") {
  const auto f = automorphism_order(fano());
  CHECK(f.complete);
  CHECK(f.order() == std::optional<std::uint64_t>(168));
  for (const auto& g : f.generators) CHECK(relabel(fano(), g) == fano());

  std::vector<PointSet> all;
  for (std::uint64_t m : oracle::all_subsets(8, 3)) all.push_back(PointSet(m));
  const auto full = automorphism_order(Design(8, 3, all));
  CHECK(full.complete);
  CHECK(full.order_string() == "40320");

  CHECK(automorphism_order(psl("a")).order() == std::optional<std::uint64_t>(660));
  CHECK(automorphism_order(psl("c")).order() == std::optional<std::uint64_t>(1320));
}

TEST_CASE("large orders are reported in decimal") {
  std::vector<PointSet> all;
  for (std::uint64_t m : oracle::all_subsets(22, 1)) all.push_back(PointSet(m));
  const auto r = automorphism_order(Design(22, 1, all));
  CHECK(r.complete);
  CHECK_FALSE(r.order().has_value());
  CHECK(r.order_string() == "1124000727777607680000");
}

TEST_CASE("budget exhaustion is unknown, never a guess") {
  IsoOptions tiny;
  tiny.node_budget = 1;
  const Design d = psl("a");
  const auto r = isomorphic(d, relabel(d, random_permutation(55, 5)), tiny);
  CHECK(r.status == IsoStatus::kUnknown);
  const auto a = automorphism_order(d, tiny);
  CHECK_FALSE(a.complete);
  const auto c = classify({d, relabel(d, random_permutation(55, 6))}, tiny);
  CHECK_FALSE(c.complete);
}

TEST_CASE("classification") {
  const Design a = psl("a"), b = psl("b"), c = psl("c");
  const auto r = classify({a, relabel(b, random_permutation(55, 8)), c, relabel(a, random_permutation(55, 9)), b});
  CHECK(r.complete);
  CHECK(r.classes == std::vector<std::vector<std::size_t>>{{0, 3}, {1, 4}, {2}});
}
