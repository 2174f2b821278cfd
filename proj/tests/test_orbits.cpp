#include <doctest.h>

#include "kmdesign/combinatorics.hpp"
#include "kmdesign/orbits.hpp"
#include "oracles.hpp"

using namespace kmdesign;

namespace {

void check_invariants(const PermutationGroup& g, const OrbitSet& o) {
  std::uint64_t total = 0;
  for (const auto& orb : o.orbits) {
    CHECK(orb.size * orb.stabilizer_order == g.order());
    CHECK(orb.representative.size() == o.subset_size);
    CHECK(orbit_of(orb.representative, g).representative == orb.representative);
    total += orb.size;
  }
  CHECK(std::is_sorted(o.orbits.begin(), o.orbits.end(),
                       [](const SubsetOrbit& a, const SubsetOrbit& b) { return a.representative < b.representative; }));
  if (o.complete) CHECK(total == oracle::binom(g.degree(), o.subset_size));
}

bool same_as_oracle(const OrbitSet& o, const std::vector<oracle::Orbit>& want) {
  if (o.orbits.size() != want.size()) return false;
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (o.orbits[i].representative.points() != want[i].representative || o.orbits[i].size != want[i].size) return false;
  }
  return true;
}

OrbitSet filtered(const OrbitSet& all, std::uint64_t bound) {
  OrbitSet out = all;
  std::erase_if(out.orbits, [&](const SubsetOrbit& o) { return o.size > bound; });
  return out;
}

}  // namespace

TEST_CASE("orbit_of") {
  const auto trivial = generate_group({Permutation(6)});
  const PointSet s = PointSet::from_points({2, 5}, 6);
  CHECK(orbit_of(s, trivial) == SubsetOrbit{s, 1, 1});

  const auto s4 = generate_group({parse_cycles("(1,2)", 4), parse_cycles("(1,2,3,4)", 4)});
  const auto o = orbit_of(PointSet::from_points({3, 4}, 4), s4);
  CHECK(o.size == 6);
  CHECK(o.stabilizer_order == 4);
  CHECK(o.representative == PointSet::from_points({1, 2}, 4));

  const auto g = oracle::group("g_z3s3");
  const PointSet five = PointSet::from_points({1, 2, 3, 4, 5}, 15);
  const auto images = oracle::orbit_images(g, five.mask());
  const auto orb = orbit_of(five, g);
  CHECK(orb.size == images.size());
  CHECK(orb.stabilizer_order == 18 / images.size());
  CHECK(orb.representative.points() == *images.begin());
}

TEST_CASE("complete enumeration counts") {
  const auto trivial = generate_group({Permutation(5)});
  const auto o = enumerate_orbits(trivial, 2);
  CHECK(o.orbits.size() == 10);
  for (const auto& orb : o.orbits) CHECK(orb.size == 1);

  struct Case {
    const char* group;
    int k;
    std::size_t count;
  };
  for (const Case& c : {Case{"g_d38", 3, 39}, Case{"g_d38", 5, 444}, Case{"g_z3s3", 4, 84}, Case{"g_z3s3", 5, 178},
                        Case{"g_192", 5, 28}, Case{"g_192", 7, 71}, Case{"g_120", 4, 25}, Case{"g_272", 5, 25}}) {
    CAPTURE(c.group);
    CAPTURE(c.k);
    const auto g = oracle::group(c.group);
    const auto s = enumerate_orbits(g, c.k);
    CHECK(s.orbits.size() == c.count);
    CHECK(s.complete);
    check_invariants(g, s);
  }
}

TEST_CASE("complete enumeration matches image-set oracle") {
  for (const auto& [name, k] : {std::pair{"g_d38", 3}, std::pair{"g_z3s3", 4}, std::pair{"g_192", 5}, std::pair{"g_272", 4}}) {
    CAPTURE(name);
    const auto g = oracle::group(name);
    CHECK(same_as_oracle(enumerate_orbits(g, k), oracle::orbits(g, k)));
  }
}

TEST_CASE("enumeration is independent of worker count") {
  const auto g = oracle::group("g_z3s3");
  OrbitOptions one, four;
  four.workers = 4;
  CHECK(enumerate_orbits(g, 5, one) == enumerate_orbits(g, 5, four));
  CHECK(enumerate_short_orbits(g, 5, 6, one) == enumerate_short_orbits(g, 5, 6, four));
}

TEST_CASE("enumeration guard") {
  const auto g = oracle::group("g_psl211");
  OrbitOptions tight;
  tight.subset_guard = 1000;
  CHECK_THROWS_AS(enumerate_orbits(g, 3, tight), LimitError);
}

TEST_CASE("short orbits equal filtered complete enumeration") {
  const auto c19 = generate_group({parse_cycles("(1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19)", 19)});
  const auto none = enumerate_short_orbits(c19, 3, 18);
  CHECK(none.orbits.empty());
  CHECK_FALSE(none.complete);
  CHECK(filtered(enumerate_orbits(c19, 3), 18).orbits.empty());

  struct Case {
    const char* group;
    int k;
    std::uint64_t bound;
  };
  for (const Case& c : {Case{"g_d38", 5, 19}, Case{"g_d38", 4, 37}, Case{"g_z3s3", 5, 9}, Case{"g_z3s3", 6, 6},
                        Case{"g_120", 8, 60}, Case{"g_192", 7, 96}, Case{"g_272", 8, 136}, Case{"g_psl211", 3, 330},
                        Case{"g_a6", 7, 180}}) {
    CAPTURE(c.group);
    CAPTURE(c.k);
    const auto g = oracle::group(c.group);
    const auto shorts = enumerate_short_orbits(g, c.k, c.bound);
    const auto want = filtered(enumerate_orbits(g, c.k), c.bound);
    CHECK(shorts.orbits == want.orbits);
    CHECK(shorts.size_bound == c.bound);
    check_invariants(g, shorts);
  }
  CHECK_THROWS_AS(enumerate_short_orbits(oracle::group("g_z3s3"), 5, 18), InputError);
}

TEST_CASE("prime order class representatives") {
  const auto g = oracle::group("g_z3s3");
  const auto reps = prime_order_class_representatives(g);
  CHECK_FALSE(reps.empty());
  for (std::size_t i : reps) {
    const auto ord = g.element(i).order();
    CHECK((ord == 2 || ord == 3));
  }
}
