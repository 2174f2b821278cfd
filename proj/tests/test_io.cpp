#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "kmdesign/io.hpp"
#include "oracles.hpp"

using namespace kmdesign;

namespace {

template <class T, class W, class R>
T round_trip(const T& x, W write, R read) {
  std::stringstream ss;
  write(ss, x);
  return read(ss, "<test>");
}

std::string error_of(const std::string& text, auto read) {
  std::istringstream in(text);
  try {
    read(in, "f");
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("group files") {
  const auto g = io::load_group(oracle::fixture("g_z3s3.grp"));
  CHECK(g.degree == 15);
  CHECK(round_trip(g, io::write_group, io::read_group).generators == g.generators);

  std::istringstream identity("degree 4  # nothing else\n\n");
  const auto id = io::read_group(identity);
  CHECK(id.degree == 4);
  CHECK(generate_group(id.generators.empty() ? std::vector{Permutation(4)} : id.generators).order() == 1);

  CHECK(error_of("degree 3\n(1,4)\n", io::read_group).rfind("f:2:", 0) == 0);
  CHECK(error_of("# only a comment\nvertices 3\n", io::read_group).rfind("f:2:", 0) == 0);
  CHECK(error_of("degree 65\n", io::read_group).find("out of range") != std::string::npos);
}

TEST_CASE("orbit files") {
  const auto g = oracle::group("g_d38");
  auto o = enumerate_orbits(g, 3);
  o.group_label = "g_d38.grp";
  CHECK(round_trip(o, io::write_orbits, io::read_orbits) == o);
  const auto s = enumerate_short_orbits(oracle::group("g_psl211"), 10, 132);
  CHECK(round_trip(s, io::write_orbits, io::read_orbits) == s);
}

TEST_CASE("matrix files") {
  const auto g = oracle::group("g_192");
  const auto a = build_matrix(g, 5, enumerate_orbits(g, 7), enumerate_orbits(g, 5));
  CHECK(round_trip(a, io::write_matrix, io::read_matrix) == a);
  std::stringstream ss;
  io::write_matrix(ss, a);
  std::string text = ss.str();
  text.erase(text.rfind(' '));
  CHECK(error_of(text + "\n", io::read_matrix).find("entries, expected") != std::string::npos);
}

TEST_CASE("solution files") {
  io::SolutionsFile s;
  s.matrix = "m.km";
  s.lambda = 2;
  s.count = 3;
  s.complete = false;
  s.solutions = {Solution{}, Solution{{0, 4, 9}}, Solution{{1}}};
  CHECK(round_trip(s, io::write_solutions, io::read_solutions) == s);
  CHECK_FALSE(error_of("solutions matrix=a lambda=1 count=1 status=done\n", io::read_solutions).empty());
  CHECK(error_of("solutions matrix=a lambda=1 count=1 status=complete\n3 1\n", io::read_solutions).find("ascend") !=
        std::string::npos);
}

TEST_CASE("design and base-block files") {
  const auto base = io::load_baseblocks(oracle::fixture("t3_blocks.blk"));
  CHECK(base.t == 4);
  CHECK(base.v == 15);
  CHECK(base.k == 5);
  CHECK(base.blocks.size() == 36);
  CHECK(round_trip(base, io::write_baseblocks, io::read_baseblocks) == base);

  io::DesignFile d{4, 2, expand(oracle::group("g_z3s3"), base.blocks)};
  CHECK(round_trip(d, io::write_design, io::read_design) == d);
  CHECK(error_of("design t=1 v=4 k=2 lambda=1 b=3\n1 2\n3 4\n", io::read_design).find("b=3") != std::string::npos);
  CHECK(error_of("design t=1 v=4 k=2 lambda=1 b=2\n1 2\n1 2\n", io::read_design).find("f:3:") == 0);
  CHECK_FALSE(error_of("baseblocks t=1 v=4 k=2\n1 2 3\n", io::read_baseblocks).empty());
  CHECK_FALSE(error_of("baseblocks t=1 v=4 k=2\n1 5\n", io::read_baseblocks).empty());
}

TEST_CASE("save replaces files atomically") {
  const auto dir = std::filesystem::temp_directory_path() / "kmdesign_io_test";
  std::filesystem::create_directories(dir);
  const auto p = dir / "g.grp";
  io::save(p, [](std::ostream& out) { out << "degree 3\n(1,2,3)\n"; });
  CHECK(io::load_group(p).generators.size() == 1);
  for (const auto& e : std::filesystem::directory_iterator(dir)) CHECK(e.path().filename() == "g.grp");
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(io::load_group(dir / "missing.grp"), InputError);
}
