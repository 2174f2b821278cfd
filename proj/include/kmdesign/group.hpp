#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "kmdesign/permutation.hpp"

namespace kmdesign {

/// A finite permutation group stored as its full element list.
///
/// Element 0 is always the identity. Immutable after construction.
class PermutationGroup {
 public:
  static constexpr std::size_t kDefaultCap = 20000;

  /// Breadth-first closure of the generators under composition.
  /// Throws InputError on an empty list or mixed degrees, LimitError when
  /// the closure grows beyond cap elements.
  static PermutationGroup generate(std::vector<Permutation> generators,
                                   std::size_t cap = kDefaultCap);

  int degree() const { return degree_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Permutation>& generators() const { return generators_; }
  const std::vector<Permutation>& elements() const { return elements_; }
  const Permutation& element(std::size_t i) const { return elements_[i]; }
  std::optional<std::size_t> index_of(const Permutation& p) const;

 private:
  PermutationGroup() = default;

  int degree_ = 0;
  std::vector<Permutation> generators_;
  std::vector<Permutation> elements_;
  std::unordered_map<Permutation, std::size_t> index_;
};

inline PermutationGroup generate_group(std::vector<Permutation> generators,
                                       std::size_t cap = PermutationGroup::kDefaultCap) {
  return PermutationGroup::generate(std::move(generators), cap);
}

}  // namespace kmdesign
