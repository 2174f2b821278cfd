#include "kmdesign/group.hpp"


#include "kmdesign/error.hpp"

namespace kmdesign {

PermutationGroup PermutationGroup::generate(std::vector<Permutation> generators, std::size_t cap) {
  if (generators.empty()) throw InputError("group needs at least one generator");
  const int degree = generators.front().degree();
  for (const auto& g : generators) {
    if (g.degree() != degree) {
      throw InputError("generators of mixed degree " + std::to_string(degree) + " and " +
                       std::to_string(g.degree()));
    }
  }

  PermutationGroup group;
  group.degree_ = degree;
  group.generators_ = std::move(generators);

  auto add = [&](Permutation p) {
    if (group.index_.contains(p)) return;
    if (group.elements_.size() >= cap) {
      throw LimitError("group closure exceeds the element cap of " + std::to_string(cap));
    }
    group.index_.emplace(p, group.elements_.size());
    group.elements_.push_back(std::move(p));
  };

  add(Permutation(degree));
  // Breadth-first: elements_ doubles as the queue.
  for (std::size_t head = 0; head < group.elements_.size(); ++head) {
    for (const auto& g : group.generators_) add(compose(g, group.elements_[head]));
  }
  return group;
}

std::optional<std::size_t> PermutationGroup::index_of(const Permutation& p) const {
  const auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace kmdesign
