#include "quantopt/pareto.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "quantopt/error.hpp"

namespace quantopt {

bool dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error("objective vectors differ in length (" +
                std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                ")");
  }
  bool strictly_better = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strictly_better = true;
  }
  return strictly_better;
}

std::vector<std::size_t> nondominated_filter(
    std::span<const std::vector<double>> points) {
  // A dominator is always lexicographically smaller than what it dominates,
  // and dominance is transitive, so scanning in lexicographic order and
  // testing only against the survivors so far is exact.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return points[a] < points[b];
                   });
  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    const bool dominated =
        std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
          return dominates(points[k], points[idx]);
        });
    if (!dominated) kept.push_back(idx);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

bool ParetoArchive::insert(const Individual& candidate) {
  if (!candidate.evaluated()) {
    throw Error("cannot archive an unevaluated individual");
  }
  for (const Individual& member : members_) {
    if (member.objectives == candidate.objectives ||
        dominates(member.objectives, candidate.objectives)) {
      return false;
    }
  }
  std::erase_if(members_, [&](const Individual& member) {
    return dominates(candidate.objectives, member.objectives);
  });
  members_.push_back(candidate);
  if (members_.size() > soft_cap_) thin();
  return true;
}

void ParetoArchive::insert_all(std::span<const Individual> candidates) {
  for (const Individual& c : candidates) insert(c);
}

void ParetoArchive::thin() {
  const std::size_t n = members_.size();
  const std::size_t k = members_.front().objectives.size();
  std::vector<double> crowding(n, 0.0);
  std::vector<std::size_t> order(n);
  for (std::size_t obj = 0; obj < k; ++obj) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return members_[a].objectives[obj] <
                              members_[b].objectives[obj];
                     });
    const double lo = members_[order.front()].objectives[obj];
    const double hi = members_[order.back()].objectives[obj];
    crowding[order.front()] = std::numeric_limits<double>::infinity();
    crowding[order.back()] = std::numeric_limits<double>::infinity();
    if (hi <= lo) continue;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      crowding[order[i]] += (members_[order[i + 1]].objectives[obj] -
                             members_[order[i - 1]].objectives[obj]) /
                            (hi - lo);
    }
  }
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return crowding[a] > crowding[b];
                   });
  order.resize(soft_cap_);
  std::sort(order.begin(), order.end());
  std::vector<Individual> kept;
  kept.reserve(order.size());
  for (std::size_t idx : order) kept.push_back(std::move(members_[idx]));
  members_ = std::move(kept);
}

}  // namespace quantopt
