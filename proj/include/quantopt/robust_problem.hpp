#ifndef QUANTOPT_ROBUST_PROBLEM_HPP_
#define QUANTOPT_ROBUST_PROBLEM_HPP_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "quantopt/ecdf.hpp"
#include "quantopt/sampling.hpp"

namespace quantopt {

// Response y(z, u) of a design z under an uncertainty realization u.
using Response =
    std::function<double(std::span<const double> z, std::span<const double> u)>;

// Optional transform applied to the quantile vector before it is returned.
using ObjectiveMap = std::function<void(std::vector<double>& objectives)>;

enum class McMode {
  frozen,   // one uncertainty sample shared by every design in a run
  redrawn,  // a fresh sample per evaluation
};

enum class Formulation {
  F1,  // (q^eps, q^(1-eps))
  F2,  // (q^0.25, q^(1-eps))
  F3,  // (q^0.45, q^(1-eps))
};

std::vector<QuantileLevel> standard_levels(Formulation formulation,
                                           double epsilon);

// Equally spaced levels i/count, i = 1..count, each clamped to 1 - epsilon.
// Throws Error if clamping would make two levels coincide.
std::vector<QuantileLevel> many_objective_levels(std::size_t count,
                                                 double epsilon);

// max(1 / mc_count, 1e-4).
double default_epsilon(std::size_t mc_count);

struct RobustProblemSpec {
  Box design_box;
  Box uncertainty_box;
  Response response;
  std::vector<QuantileLevel> levels;
  std::size_t mc_count = 2500;
  McMode mc_mode = McMode::frozen;
  Seed seed;
  ObjectiveMap post_map;  // identity when empty
};

// Reduces a random response to a deterministic objective vector: design z
// maps to the quantiles (q^s_1(z), ..., q^s_k(z)) of the Monte Carlo ECDF of
// y(z, U). All objectives are minimized.
class RobustProblem {
 public:
  // Validates the spec and, in frozen mode, draws the shared sample.
  explicit RobustProblem(RobustProblemSpec spec);

  const Box& design_box() const { return spec_.design_box; }
  const Box& uncertainty_box() const { return spec_.uncertainty_box; }
  const std::vector<QuantileLevel>& levels() const { return spec_.levels; }
  std::size_t mc_count() const { return spec_.mc_count; }
  McMode mc_mode() const { return spec_.mc_mode; }
  Seed seed() const { return spec_.seed; }
  std::size_t objective_count() const { return spec_.levels.size(); }

  // Evaluates with an explicit draw id. In redrawn mode the uncertainty
  // sample comes from stream (seed, draw_id); frozen mode ignores draw_id.
  std::vector<double> evaluate(std::span<const double> z,
                               std::uint64_t draw_id) const;

  // Redrawn mode takes the next value of an internal call counter as the
  // draw id; use the explicit overload where evaluation order may vary.
  std::vector<double> evaluate(std::span<const double> z) const;

  // ECDF of y(z, U) over the Monte Carlo sample used by evaluate().
  Ecdf response_ecdf(std::span<const double> z, std::uint64_t draw_id = 0) const;

  // Same, but with a fresh sample of the given size from stream
  // (seed, draw_id). Useful for re-evaluating designs at higher resolution.
  Ecdf response_ecdf(std::span<const double> z, std::size_t count,
                     std::uint64_t draw_id) const;

 private:
  Ecdf ecdf_over(std::span<const double> z, const Matrix& samples) const;

  RobustProblemSpec spec_;
  Matrix frozen_;
  std::unique_ptr<std::atomic<std::uint64_t>> calls_ =
      std::make_unique<std::atomic<std::uint64_t>>(0);
};

}  // namespace quantopt

#endif  // QUANTOPT_ROBUST_PROBLEM_HPP_
