#include "kmdesign/io.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace kmdesign::io {

namespace {

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  // Next non-blank line with comments stripped; false at end of input.
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  }

  std::string require(const char* what) {
    std::string line;
    if (!next(line)) fail(std::string("unexpected end of input, expected ") + what);
    return line;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError(source_ + ":" + std::to_string(number_) + ": " + msg);
  }

 private:
  std::istream& in_;
  std::string source_;
  int number_ = 0;
};

std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string w; ss >> w;) out.push_back(w);
  return out;
}

std::uint64_t to_uint(const std::string& s, const LineReader& r, const std::string& what) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) r.fail("bad " + what + " '" + s + "'");
  return x;
}

int to_int(const std::string& s, const LineReader& r, const std::string& what) {
  const std::uint64_t x = to_uint(s, r, what);
  if (x > 1'000'000) r.fail(what + " " + s + " out of range");
  return static_cast<int>(x);
}

bool to_bool(const std::string& s, const LineReader& r, const std::string& what) {
  if (s == "true") return true;
  if (s == "false") return false;
  r.fail("bad " + what + " '" + s + "', expected true or false");
}

// "<keyword> a=1 b=2" -> {a: 1, b: 2}, checking the keyword and keys.
std::map<std::string, std::string> header(LineReader& r, const std::string& keyword,
                                          std::initializer_list<const char*> keys) {
  const auto words = split(r.require(keyword.c_str()));
  if (words.empty() || words[0] != keyword) r.fail("expected a '" + keyword + "' header");
  std::map<std::string, std::string> kv;
  for (std::size_t i = 1; i < words.size(); ++i) {
    const auto eq = words[i].find('=');
    if (eq == std::string::npos) r.fail("header field '" + words[i] + "' is not key=value");
    kv[words[i].substr(0, eq)] = words[i].substr(eq + 1);
  }
  for (const char* k : keys) {
    if (!kv.contains(k)) r.fail(std::string("header lacks ") + k + "=");
  }
  return kv;
}

PointSet parse_points(const std::vector<std::string>& words, std::size_t from, int v, const LineReader& r) {
  std::vector<int> pts;
  for (std::size_t i = from; i < words.size(); ++i) pts.push_back(to_int(words[i], r, "point"));
  try {
    return PointSet::from_points(pts, v);
  } catch (const InputError& e) {
    r.fail(e.what());
  }
}

void put_points(std::ostream& out, PointSet s) {
  bool first = true;
  s.for_each([&](int x) {
    if (!first) out << ' ';
    out << x;
    first = false;
  });
}

template <typename T, typename F>
T load_file(const std::filesystem::path& p, F&& reader) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot open " + p.string());
  return reader(in, p.string());
}

}  // namespace

GroupFile read_group(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  const auto words = split(r.require("degree"));
  if (words.size() != 2 || words[0] != "degree") r.fail("expected 'degree <v>'");
  GroupFile g;
  g.degree = to_int(words[1], r, "degree");
  if (g.degree < 1 || g.degree > kMaxPoints) r.fail("degree " + words[1] + " out of range");
  for (std::string line; r.next(line);) {
    try {
      g.generators.push_back(parse_cycles(line, g.degree));
    } catch (const InputError& e) {
      r.fail(e.what());
    }
  }
  if (g.generators.empty()) g.generators.emplace_back(g.degree);
  return g;
}

void write_group(std::ostream& out, const GroupFile& g) {
  out << "degree " << g.degree << '\n';
  for (const auto& p : g.generators) out << p.to_cycle_string() << '\n';
}

OrbitSet read_orbits(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  auto kv = header(r, "orbits", {"v", "k", "complete", "bound"});
  OrbitSet o;
  o.degree = to_int(kv["v"], r, "v");
  o.subset_size = to_int(kv["k"], r, "k");
  o.complete = to_bool(kv["complete"], r, "complete");
  o.group_label = kv.contains("group") && kv["group"] != "-" ? kv["group"] : "";
  if (kv.contains("order")) o.group_order = to_uint(kv["order"], r, "order");
  if (kv["bound"] != "none") o.size_bound = to_uint(kv["bound"], r, "bound");
  for (std::string line; r.next(line);) {
    const auto words = split(line);
    if (words.size() < 2) r.fail("orbit line needs a size and a stabilizer order");
    SubsetOrbit orb;
    orb.size = to_uint(words[0], r, "orbit size");
    orb.stabilizer_order = to_uint(words[1], r, "stabilizer order");
    orb.representative = parse_points(words, 2, o.degree, r);
    if (orb.representative.size() != o.subset_size) r.fail("representative does not have k points");
    o.orbits.push_back(orb);
  }
  return o;
}

void write_orbits(std::ostream& out, const OrbitSet& o) {
  out << "orbits v=" << o.degree << " k=" << o.subset_size << " group=" << (o.group_label.empty() ? "-" : o.group_label)
      << " order=" << o.group_order << " complete=" << (o.complete ? "true" : "false") << " bound=";
  if (o.size_bound) {
    out << *o.size_bound;
  } else {
    out << "none";
  }
  out << '\n';
  for (const auto& orb : o.orbits) {
    out << orb.size << ' ' << orb.stabilizer_order << ' ';
    put_points(out, orb.representative);
    out << '\n';
  }
}

KmMatrix read_matrix(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  auto kv = header(r, "km", {"t", "v", "k", "rows", "cols", "complete"});
  const int t = to_int(kv["t"], r, "t");
  const int v = to_int(kv["v"], r, "v");
  const int k = to_int(kv["k"], r, "k");
  const std::size_t m = to_uint(kv["rows"], r, "rows");
  const std::size_t n = to_uint(kv["cols"], r, "cols");
  auto meta = [&](std::size_t count, int size) {
    std::vector<OrbitMeta> out;
    for (std::size_t i = 0; i < count; ++i) {
      const auto words = split(r.require("orbit metadata"));
      if (words.empty()) r.fail("empty metadata line");
      OrbitMeta om{parse_points(words, 1, v, r), to_uint(words[0], r, "orbit size")};
      if (om.representative.size() != size) r.fail("representative has the wrong size");
      out.push_back(om);
    }
    return out;
  };
  auto rows = meta(m, t);
  auto cols = meta(n, k);
  std::vector<std::uint32_t> entries;
  entries.reserve(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    const auto words = split(r.require("matrix row"));
    if (words.size() != n) r.fail("matrix row has " + std::to_string(words.size()) + " entries, expected " + std::to_string(n));
    for (const auto& w : words) {
      const std::uint64_t x = to_uint(w, r, "entry");
      if (x > UINT32_MAX) r.fail("entry " + w + " exceeds 32 bits");
      entries.push_back(static_cast<std::uint32_t>(x));
    }
  }
  if (std::string extra; r.next(extra)) r.fail("trailing data after the matrix");
  return KmMatrix(t, v, k, std::move(rows), std::move(cols), std::move(entries), to_bool(kv["complete"], r, "complete"));
}

void write_matrix(std::ostream& out, const KmMatrix& a) {
  out << "km t=" << a.t() << " v=" << a.v() << " k=" << a.k() << " rows=" << a.num_rows() << " cols=" << a.num_cols()
      << " complete=" << (a.complete_columns() ? "true" : "false") << '\n';
  for (const auto* list : {&a.rows(), &a.cols()}) {
    for (const auto& om : *list) {
      out << om.size << ' ';
      put_points(out, om.representative);
      out << '\n';
    }
  }
  for (std::size_t i = 0; i < a.num_rows(); ++i) {
    const auto row = a.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
    out << '\n';
  }
}

SolutionsFile read_solutions(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  auto kv = header(r, "solutions", {"lambda", "count", "status"});
  SolutionsFile s;
  s.matrix = kv.contains("matrix") ? kv["matrix"] : "";
  s.lambda = to_uint(kv["lambda"], r, "lambda");
  s.count = to_uint(kv["count"], r, "count");
  if (kv["status"] != "complete" && kv["status"] != "incomplete") r.fail("bad status '" + kv["status"] + "'");
  s.complete = kv["status"] == "complete";
  for (std::string line; r.next(line);) {
    Solution x;
    const auto words = split(line);
    if (words.size() == 1 && words[0] == "-") {
      s.solutions.push_back(std::move(x));
      continue;
    }
    for (const auto& w : words) x.columns.push_back(to_uint(w, r, "column index"));
    if (!std::is_sorted(x.columns.begin(), x.columns.end())) r.fail("column indices must ascend");
    s.solutions.push_back(std::move(x));
  }
  return s;
}

void write_solutions(std::ostream& out, const SolutionsFile& s) {
  out << "solutions matrix=" << (s.matrix.empty() ? "-" : s.matrix) << " lambda=" << s.lambda << " count=" << s.count
      << " status=" << (s.complete ? "complete" : "incomplete") << '\n';
  for (const auto& x : s.solutions) {
    if (x.columns.empty()) {
      out << "-\n";  // the zero vector
      continue;
    }
    for (std::size_t i = 0; i < x.columns.size(); ++i) out << (i ? " " : "") << x.columns[i];
    out << '\n';
  }
}

DesignFile read_design(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  auto kv = header(r, "design", {"t", "v", "k", "lambda", "b"});
  DesignFile d;
  d.t = to_int(kv["t"], r, "t");
  d.lambda = to_uint(kv["lambda"], r, "lambda");
  const int v = to_int(kv["v"], r, "v");
  const int k = to_int(kv["k"], r, "k");
  const std::uint64_t b = to_uint(kv["b"], r, "b");
  std::vector<PointSet> blocks;
  for (std::string line; r.next(line);) blocks.push_back(parse_points(split(line), 0, v, r));
  if (blocks.size() != b) r.fail("header says b=" + std::to_string(b) + " but " + std::to_string(blocks.size()) + " blocks follow");
  try {
    d.design = Design(v, k, std::move(blocks));
  } catch (const InputError& e) {
    r.fail(e.what());
  }
  return d;
}

void write_design(std::ostream& out, const DesignFile& d) {
  out << "design t=" << d.t << " v=" << d.design.v() << " k=" << d.design.k() << " lambda=" << d.lambda
      << " b=" << d.design.b() << '\n';
  for (PointSet blk : d.design.blocks()) {
    put_points(out, blk);
    out << '\n';
  }
}

BaseBlocks read_baseblocks(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  auto kv = header(r, "baseblocks", {"v", "k"});
  BaseBlocks b;
  b.t = kv.contains("t") ? to_int(kv["t"], r, "t") : 0;
  b.v = to_int(kv["v"], r, "v");
  b.k = to_int(kv["k"], r, "k");
  for (std::string line; r.next(line);) {
    b.blocks.push_back(parse_points(split(line), 0, b.v, r));
    if (b.blocks.back().size() != b.k) r.fail("base block does not have k=" + std::to_string(b.k) + " points");
  }
  return b;
}

void write_baseblocks(std::ostream& out, const BaseBlocks& b) {
  out << "baseblocks t=" << b.t << " v=" << b.v << " k=" << b.k << '\n';
  for (PointSet blk : b.blocks) {
    put_points(out, blk);
    out << '\n';
  }
}

GroupFile load_group(const std::filesystem::path& p) { return load_file<GroupFile>(p, read_group); }
OrbitSet load_orbits(const std::filesystem::path& p) { return load_file<OrbitSet>(p, read_orbits); }
KmMatrix load_matrix(const std::filesystem::path& p) { return load_file<KmMatrix>(p, read_matrix); }
SolutionsFile load_solutions(const std::filesystem::path& p) { return load_file<SolutionsFile>(p, read_solutions); }
DesignFile load_design(const std::filesystem::path& p) { return load_file<DesignFile>(p, read_design); }
BaseBlocks load_baseblocks(const std::filesystem::path& p) { return load_file<BaseBlocks>(p, read_baseblocks); }

void save(const std::filesystem::path& p, const std::function<void(std::ostream&)>& writer) {
  std::filesystem::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw InputError("cannot write " + p.string());
    writer(out);
    if (!out) throw InputError("write failed for " + p.string());
  }
  std::filesystem::rename(tmp, p);
}

}  // namespace kmdesign::io
