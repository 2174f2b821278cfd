#include <doctest.h>

#include <random>

#include "kmdesign/error.hpp"
#include "kmdesign/group.hpp"
#include "oracles.hpp"

using namespace kmdesign;

TEST_CASE("parse_cycles") {
  CHECK(parse_cycles("(1,2)(3,4)", 5).images() == std::vector<int>{2, 1, 4, 3, 5});
  CHECK(parse_cycles("", 7).is_identity());
  CHECK(parse_cycles(" ( 1 , 3 ) ", 3).images() == std::vector<int>{3, 2, 1});

  const Permutation p = parse_cycles("(4,5,6)(7,8,9)(10,11,12)(13,14,15)", 15);
  for (int i = 1; i <= 3; ++i) CHECK(p(i) == i);
  CHECK(p(4) == 5);
  CHECK(p(6) == 4);
  CHECK(p(15) == 13);
  CHECK(p.order() == 3);
  CHECK(p.cycles().size() == 4);

  CHECK_THROWS_AS(parse_cycles("(1,8)", 7), InputError);
  CHECK_THROWS_AS(parse_cycles("(1,2)(2,3)", 7), InputError);
  CHECK_THROWS_AS(parse_cycles("(1,2", 7), InputError);
  CHECK_THROWS_AS(parse_cycles("1,2)", 7), InputError);
  CHECK_THROWS_AS(parse_cycles("(1,,2)", 7), InputError);
  CHECK_THROWS_AS(parse_cycles("(1,x)", 7), InputError);
}

TEST_CASE("cycle string round trip") {
  const Permutation p = parse_cycles("(1,5,2)(3,7)", 9);
  CHECK(parse_cycles(p.to_cycle_string(), 9) == p);
  CHECK(Permutation(4).to_cycle_string() == "()");
}

TEST_CASE("compose applies the right factor first") {
  const Permutation a = parse_cycles("(1,2)", 3);
  const Permutation b = parse_cycles("(2,3)", 3);
  // By hand: 1 -b-> 1 -a-> 2, 2 -b-> 3 -a-> 3, 3 -b-> 2 -a-> 1.
  CHECK(compose(a, b).images() == std::vector<int>{2, 3, 1});
  CHECK(compose(a, b) == parse_cycles("(1,2,3)", 3));
  CHECK(compose(b, a) == parse_cycles("(1,3,2)", 3));
  CHECK(compose(Permutation(3), a) == a);
  CHECK(compose(a, a.inverse()).is_identity());
  CHECK_THROWS_AS(compose(a, Permutation(4)), InputError);
}

TEST_CASE("fixture group orders") {
  const std::pair<const char*, std::size_t> cases[] = {
      {"g_psl211", 660}, {"g_m11", 7920}, {"g_d38", 38},   {"g_a6", 360},  {"g_s6", 720},
      {"g_z3s3", 18},    {"g_120", 120},  {"g_192", 192}, {"g_272", 272},
  };
  for (const auto& [name, order] : cases) {
    CAPTURE(name);
    CHECK(oracle::group(name).order() == order);
  }
}

TEST_CASE("generate_group edge cases") {
  CHECK(generate_group({Permutation(10)}).order() == 1);
  const auto s5 = generate_group({parse_cycles("(1,2)", 5), parse_cycles("(1,2,3,4,5)", 5)});
  CHECK(s5.order() == 120);
  CHECK_THROWS_AS(generate_group({parse_cycles("(1,2)", 5), parse_cycles("(1,2,3,4,5)", 5)}, 100), LimitError);
  CHECK_THROWS_AS(generate_group({}), InputError);
  CHECK_THROWS_AS(generate_group({Permutation(3), Permutation(4)}), InputError);
  CHECK(s5.element(0).is_identity());
  CHECK(s5.index_of(parse_cycles("(2,4)", 5)).has_value());
}

TEST_CASE("apply_to_subset") {
  CHECK(apply_to_subset(Permutation(9), PointSet::from_points({1, 5, 9}, 9)) == PointSet::from_points({1, 5, 9}, 9));
  CHECK(apply_to_subset(parse_cycles("(1,2,3)", 3), PointSet::from_points({1, 2}, 3)) == PointSet::from_points({2, 3}, 3));
  const Permutation p = parse_cycles("(4,5,6)(7,8,9)(10,11,12)(13,14,15)", 15);
  CHECK(apply_to_subset(p, PointSet::from_points({1, 2, 4}, 15)) == PointSet::from_points({1, 2, 5}, 15));
  CHECK_THROWS_AS(apply_to_subset(Permutation(3), PointSet::from_points({4}, 4)), InputError);
}

TEST_CASE("group laws on fixture groups") {
  std::mt19937_64 rng(7);
  for (const char* name : {"g_d38", "g_z3s3", "g_120", "g_192", "g_272", "g_a6"}) {
    CAPTURE(name);
    const auto g = oracle::group(name);
    const auto& el = g.elements();
    for (const auto& p : el) CHECK(compose(p.inverse(), p).is_identity());
    std::uniform_int_distribution<std::size_t> pick(0, el.size() - 1);
    std::uniform_int_distribution<std::uint64_t> mask(0, (std::uint64_t{1} << g.degree()) - 1);
    for (int trial = 0; trial < 200; ++trial) {
      const auto& p = el[pick(rng)];
      const auto& q = el[pick(rng)];
      const auto& r = el[pick(rng)];
      CHECK(compose(compose(p, q), r) == compose(p, compose(q, r)));
      CHECK(g.index_of(compose(p, q)).has_value());
      const PointSet s(mask(rng));
      CHECK(apply_to_subset(compose(p, q), s) == apply_to_subset(p, apply_to_subset(q, s)));
      CHECK(apply_to_subset(p, s).mask() == oracle::image(p, s.mask()));
    }
  }
}

TEST_CASE("point set order is lexicographic on sorted points") {
  const int v = 9;
  auto subsets = oracle::all_subsets(v, 3);
  auto more = oracle::all_subsets(v, 2);
  subsets.insert(subsets.end(), more.begin(), more.end());
  for (std::uint64_t a : subsets) {
    for (std::uint64_t b : subsets) {
      CHECK((PointSet(a) < PointSet(b)) == (oracle::sorted_points(a) < oracle::sorted_points(b)));
    }
  }
  std::vector<PointSet> seen;
  for_each_k_subset(v, 4, [&](PointSet s) { seen.push_back(s); });
  CHECK(seen.size() == oracle::binom(v, 4));
  CHECK(std::is_sorted(seen.begin(), seen.end()));
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}
