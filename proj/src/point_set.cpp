#include "kmdesign/point_set.hpp"

#include <sstream>

#include "kmdesign/error.hpp"

namespace kmdesign {

PointSet PointSet::from_points(std::span<const int> points, int degree) {
  if (degree < 0 || degree > kMaxPoints) {
    throw InputError("degree " + std::to_string(degree) + " outside supported range [0, 64]");
  }
  std::uint64_t mask = 0;
  for (int p : points) {
    if (p < 1 || p > degree) {
      throw InputError("point " + std::to_string(p) + " outside [1, " + std::to_string(degree) + "]");
    }
    const std::uint64_t bit = std::uint64_t{1} << (p - 1);
    if ((mask & bit) != 0) throw InputError("point " + std::to_string(p) + " repeated");
    mask |= bit;
  }
  return PointSet(mask);
}

std::vector<int> PointSet::points() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  for_each([&](int p) { out.push_back(p); });
  return out;
}

std::string PointSet::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for_each([&](int p) {
    if (!first) os << ", ";
    os << p;
    first = false;
  });
  os << '}';
  return os.str();
}

}  // namespace kmdesign
