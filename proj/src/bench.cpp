#include "quantopt/bench.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "quantopt/error.hpp"
#include "quantopt/parallel.hpp"
#include "quantopt/pareto.hpp"

namespace quantopt {

namespace {

void require_same_dim(std::span<const double> d, std::span<const double> u) {
  if (d.size() != u.size()) {
    throw Error("design and uncertainty dimensions differ (" +
                std::to_string(d.size()) + " vs " + std::to_string(u.size()) +
                ")");
  }
}

}  // namespace

void BumpParams::validate() const {
  if (width.size() != amplitude.size() || centers.size() != amplitude.size()) {
    throw Error("bump parameters: amplitude, width and centers sizes differ");
  }
  for (std::size_t i = 0; i < width.size(); ++i) {
    if (!(width[i] > 0.0)) {
      throw Error("bump parameters: width " + std::to_string(i) +
                  " must be positive");
    }
    if (centers[i].size() != dim()) {
      throw Error("bump parameters: center rows have different lengths");
    }
  }
}

BumpParams BumpParams::illustrative() {
  return BumpParams{{0.9, 0.5, 0.8, 0.8},
                    {50.0, 1.0, 80.0, 100.0},
                    {{1.0}, {2.5}, {4.0}, {4.2}}};
}

Box bump_design_box() { return Box({0.0}, {5.0}); }
Box bump_uncertainty_box() { return Box({-0.25}, {0.25}); }

double eval_bump(const BumpParams& params, std::span<const double> x) {
  double value = 1.0;
  for (std::size_t i = 0; i < params.bumps(); ++i) {
    const auto& c = params.centers[i];
    if (c.size() != x.size()) {
      throw Error("bump point dimension does not match centers");
    }
    double r2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      r2 += (x[j] - c[j]) * (x[j] - c[j]);
    }
    value -= params.amplitude[i] * std::exp(-params.width[i] * r2);
  }
  return value;
}

double eval_bump(const BumpParams& params, std::span<const double> z,
                 std::span<const double> u) {
  require_same_dim(z, u);
  std::vector<double> x(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) x[j] = z[j] + u[j];
  return eval_bump(params, x);
}

double eval_mv4(std::span<const double> d, std::span<const double> u) {
  require_same_dim(d, u);
  if (d.empty()) throw Error("mv4 needs at least one dimension");
  double sum = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    sum += (2.0 * std::numbers::pi - u[i]) * std::cos(u[i] - d[i]);
  }
  return sum / static_cast<double>(d.size());
}

double eval_mv1(std::span<const double> d, std::span<const double> u) {
  require_same_dim(d, u);
  double sum = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) sum += d[i] * u[i] * u[i];
  return sum;
}

MvSpec mv_spec(MvId id, std::size_t n) {
  if (n == 0) throw Error("benchmark dimension must be at least 1");
  switch (id) {
    case MvId::mv4:
      return {id, n, Box::cube(n, 0.0, 2.0 * std::numbers::pi),
              Box::cube(n, 0.0, 3.0)};
    case MvId::mv1:
      return {id, n, Box::cube(n, 1.0, 5.0), Box::cube(n, -5.0, 3.0)};
  }
  throw Error("unknown benchmark id");
}

Mv4References mv4_reference_solutions(std::size_t n) {
  if (n == 0) throw Error("benchmark dimension must be at least 1");
  const std::vector<double> zero(n, 0.0);
  const std::vector<double> d_min(n, std::numbers::pi);
  const std::vector<double> d_minimax(n, kMv4MinimaxDesign);
  return {{d_min, zero, eval_mv4(d_min, zero)},
          {d_minimax, zero, eval_mv4(d_minimax, zero)}};
}

std::size_t multiset_count(std::size_t k, std::size_t n) {
  // C(k + n - 1, n), computed incrementally as C(k - 1 + i, i).
  if (k == 0) return n == 0 ? 1 : 0;
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  unsigned __int128 count = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    count = count * (k - 1 + i) / i;
    if (count > kMax) return kMax;
  }
  return static_cast<std::size_t>(count);
}

std::vector<FrontPoint> compose_front_from_1d(
    std::span<const FrontPoint> front_1d, std::size_t n,
    const FrontEvaluator& evaluator, std::size_t max_candidates,
    std::size_t threads) {
  if (front_1d.empty()) throw Error("one-dimensional front is empty");
  if (n < 1) throw Error("target dimension must be at least 1");
  for (const auto& p : front_1d) {
    if (p.design.size() != 1) {
      throw Error("one-dimensional front points must have scalar designs");
    }
  }
  const std::size_t k = front_1d.size();
  const std::size_t total = multiset_count(k, n);
  if (total > max_candidates) {
    throw Error("composed front needs " + std::to_string(total) +
                " candidates, above the cap of " +
                std::to_string(max_candidates) +
                "; thin the one-dimensional front first");
  }

  // Non-decreasing index tuples enumerate multisets exactly once.
  std::vector<std::vector<double>> designs;
  designs.reserve(total);
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    std::vector<double> design(n);
    for (std::size_t j = 0; j < n; ++j) design[j] = front_1d[idx[j]].design[0];
    designs.push_back(std::move(design));
    std::size_t pos = n;
    while (pos > 0 && idx[pos - 1] == k - 1) --pos;
    if (pos == 0) break;
    const std::size_t next = idx[pos - 1] + 1;
    for (std::size_t j = pos - 1; j < n; ++j) idx[j] = next;
  }

  std::vector<std::vector<double>> objectives(designs.size());
  parallel_for(designs.size(), threads,
               [&](std::size_t i) { objectives[i] = evaluator(designs[i]); });

  std::vector<FrontPoint> front;
  for (std::size_t i : nondominated_filter(objectives)) {
    front.push_back({std::move(designs[i]), std::move(objectives[i])});
  }
  return front;
}

}  // namespace quantopt
