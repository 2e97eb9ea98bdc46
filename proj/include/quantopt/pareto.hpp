#ifndef QUANTOPT_PARETO_HPP_
#define QUANTOPT_PARETO_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace quantopt {

// Pareto dominance for minimization: a <= b componentwise and a < b in at
// least one component. Throws Error on a length mismatch.
bool dominates(std::span<const double> a, std::span<const double> b);

// Indices (ascending) of the points not dominated by any other point.
// Duplicated points do not dominate each other, so all copies are kept.
std::vector<std::size_t> nondominated_filter(
    std::span<const std::vector<double>> points);

// A design vector together with its objective vector.
struct Individual {
  std::vector<double> genome;
  std::vector<double> objectives;  // empty until evaluated

  bool evaluated() const { return !objectives.empty(); }
  bool operator==(const Individual&) const = default;
};

// The evolving set of mutually non-dominated individuals.
//
// A candidate is rejected when some member dominates it or has an identical
// objective vector; otherwise it is added and every member it dominates is
// dropped. If the archive grows past `soft_cap`, the most crowded members
// are thinned out.
class ParetoArchive {
 public:
  static constexpr std::size_t kDefaultSoftCap = 100000;

  explicit ParetoArchive(std::size_t soft_cap = kDefaultSoftCap)
      : soft_cap_(soft_cap) {}

  // Returns true if the candidate entered the archive. Throws Error if the
  // candidate is unevaluated.
  bool insert(const Individual& candidate);
  void insert_all(std::span<const Individual> candidates);

  const std::vector<Individual>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

 private:
  void thin();

  std::size_t soft_cap_;
  std::vector<Individual> members_;
};

}  // namespace quantopt

#endif  // QUANTOPT_PARETO_HPP_
