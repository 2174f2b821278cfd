#include "kmdesign/permutation.hpp"

#include <cctype>
#include <numeric>
#include <sstream>

#include "kmdesign/error.hpp"

namespace kmdesign {

namespace {

void check_degree(int degree) {
  if (degree < 1 || degree > kMaxPoints) {
    throw InputError("permutation degree " + std::to_string(degree) + " outside [1, 64]");
  }
}

}  // namespace

Permutation::Permutation(int degree) {
  check_degree(degree);
  image_.resize(static_cast<std::size_t>(degree));
  std::iota(image_.begin(), image_.end(), std::uint8_t{0});
}

Permutation Permutation::from_images(const std::vector<int>& images) {
  const int n = static_cast<int>(images.size());
  Permutation p(n);
  std::vector<bool> seen(images.size(), false);
  for (int i = 0; i < n; ++i) {
    const int img = images[static_cast<std::size_t>(i)];
    if (img < 1 || img > n) {
      throw InputError("image " + std::to_string(img) + " of point " + std::to_string(i + 1) +
                       " outside [1, " + std::to_string(n) + "]");
    }
    if (seen[static_cast<std::size_t>(img - 1)]) {
      throw InputError("image " + std::to_string(img) + " appears twice; not a bijection");
    }
    seen[static_cast<std::size_t>(img - 1)] = true;
    p.image_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(img - 1);
  }
  return p;
}

std::vector<int> Permutation::images() const {
  std::vector<int> out(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) out[i] = image_[i] + 1;
  return out;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < image_.size(); ++i) {
    if (image_[i] != i) return false;
  }
  return true;
}

Permutation Permutation::inverse() const {
  Permutation inv(degree());
  for (std::size_t i = 0; i < image_.size(); ++i) inv.image_[image_[i]] = static_cast<std::uint8_t>(i);
  return inv;
}

std::uint64_t Permutation::order() const {
  std::uint64_t ord = 1;
  for (const auto& c : cycles()) ord = std::lcm(ord, static_cast<std::uint64_t>(c.size()));
  return ord;
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(image_.size(), false);
  for (std::size_t start = 0; start < image_.size(); ++start) {
    if (seen[start] || image_[start] == start) continue;
    std::vector<int> cycle;
    for (std::size_t x = start; !seen[x]; x = image_[x]) {
      seen[x] = true;
      cycle.push_back(static_cast<int>(x) + 1);
    }
    out.push_back(std::move(cycle));
  }
  return out;
}

std::string Permutation::to_cycle_string() const {
  const auto cs = cycles();
  if (cs.empty()) return "()";
  std::ostringstream os;
  for (const auto& c : cs) {
    os << '(';
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    os << ')';
  }
  return os.str();
}

PointSet Permutation::apply(PointSet s) const {
  if (s.max_point() > degree()) {
    throw InputError("subset " + s.to_string() + " has points beyond degree " + std::to_string(degree()));
  }
  return apply_unchecked(s);
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree()) {
    throw InputError("cannot compose permutations of degree " + std::to_string(p.degree()) + " and " +
                     std::to_string(q.degree()));
  }
  std::vector<int> images(static_cast<std::size_t>(p.degree()));
  for (int i = 1; i <= p.degree(); ++i) images[static_cast<std::size_t>(i - 1)] = p(q(i));
  return Permutation::from_images(images);
}

Permutation parse_cycles(std::string_view text, int degree) {
  check_degree(degree);
  std::vector<int> images(static_cast<std::size_t>(degree));
  std::iota(images.begin(), images.end(), 1);
  std::vector<bool> used(static_cast<std::size_t>(degree), false);

  auto fail = [&](const std::string& what) {
    throw InputError("cycle notation \"" + std::string(text) + "\": " + what);
  };

  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };

  skip_ws();
  while (pos < text.size()) {
    if (text[pos] != '(') fail("expected '(' at offset " + std::to_string(pos));
    ++pos;
    std::vector<int> cycle;
    bool closed = false;
    while (true) {
      skip_ws();
      if (pos >= text.size()) break;
      if (text[pos] == ')') {
        closed = true;
        ++pos;
        break;
      }
      if (!cycle.empty()) {
        if (text[pos] != ',') fail("expected ',' or ')' at offset " + std::to_string(pos));
        ++pos;
        skip_ws();
      }
      if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
        fail("expected a point at offset " + std::to_string(pos));
      }
      long value = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value = value * 10 + (text[pos] - '0');
        if (value > kMaxPoints * 1000L) fail("point value too large");
        ++pos;
      }
      if (value < 1 || value > degree) {
        fail("point " + std::to_string(value) + " outside [1, " + std::to_string(degree) + "]");
      }
      const auto v = static_cast<std::size_t>(value - 1);
      if (used[v]) fail("point " + std::to_string(value) + " appears twice");
      used[v] = true;
      cycle.push_back(static_cast<int>(value));
    }
    if (!closed) fail("unterminated cycle");
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      images[static_cast<std::size_t>(cycle[i] - 1)] = cycle[(i + 1) % cycle.size()];
    }
    skip_ws();
  }
  return Permutation::from_images(images);
}

}  // namespace kmdesign
