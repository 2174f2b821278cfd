#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "kmdesign/designs.hpp"
#include "kmdesign/group.hpp"
#include "kmdesign/km_matrix.hpp"
#include "kmdesign/orbits.hpp"
#include "kmdesign/solver.hpp"

// Plain-text formats. Everything after '#' on a line is a comment and blank
// lines are ignored. Parse errors throw InputError naming the source and line.
namespace kmdesign::io {

struct GroupFile {
  int degree = 0;
  std::vector<Permutation> generators;
};

// degree <v>
// <generator in cycle notation>...
GroupFile read_group(std::istream& in, const std::string& source = "<group>");
void write_group(std::ostream& out, const GroupFile& g);

// orbits v=<v> k=<k> group=<label> complete=<bool> bound=<int|none>
// <size> <stabilizer order> <points>...
OrbitSet read_orbits(std::istream& in, const std::string& source = "<orbits>");
void write_orbits(std::ostream& out, const OrbitSet& o);

// km t=<t> v=<v> k=<k> rows=<m> cols=<n> complete=<bool>
// m lines <size> <points>, n lines <size> <points>, m lines of n entries
KmMatrix read_matrix(std::istream& in, const std::string& source = "<matrix>");
void write_matrix(std::ostream& out, const KmMatrix& a);

struct SolutionsFile {
  std::string matrix;
  std::uint64_t lambda = 0;
  std::uint64_t count = 0;
  bool complete = true;
  std::vector<Solution> solutions;

  friend bool operator==(const SolutionsFile&, const SolutionsFile&) = default;
};

// solutions matrix=<file> lambda=<l> count=<N> status=<complete|incomplete>
// <0-based column indices>... ('-' for the zero vector)
SolutionsFile read_solutions(std::istream& in, const std::string& source = "<solutions>");
void write_solutions(std::ostream& out, const SolutionsFile& s);

struct DesignFile {
  int t = 0;
  std::uint64_t lambda = 0;
  Design design;

  friend bool operator==(const DesignFile&, const DesignFile&) = default;
};

// design t=<t> v=<v> k=<k> lambda=<l> b=<count>
// <points>...
DesignFile read_design(std::istream& in, const std::string& source = "<design>");
void write_design(std::ostream& out, const DesignFile& d);

struct BaseBlocks {
  int t = 0;
  int v = 0;
  int k = 0;
  std::vector<PointSet> blocks;

  friend bool operator==(const BaseBlocks&, const BaseBlocks&) = default;
};

// baseblocks t=<t> v=<v> k=<k>
// <points>...
BaseBlocks read_baseblocks(std::istream& in, const std::string& source = "<baseblocks>");
void write_baseblocks(std::ostream& out, const BaseBlocks& b);

GroupFile load_group(const std::filesystem::path& p);
OrbitSet load_orbits(const std::filesystem::path& p);
KmMatrix load_matrix(const std::filesystem::path& p);
SolutionsFile load_solutions(const std::filesystem::path& p);
DesignFile load_design(const std::filesystem::path& p);
BaseBlocks load_baseblocks(const std::filesystem::path& p);

/// Writes via a temporary file in the same directory, then renames.
void save(const std::filesystem::path& p, const std::function<void(std::ostream&)>& writer);

}  // namespace kmdesign::io
