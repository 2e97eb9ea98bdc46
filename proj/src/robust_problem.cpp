#include "quantopt/robust_problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quantopt/csv.hpp"
#include "quantopt/error.hpp"

namespace quantopt {

namespace {

// Stream tag separating redrawn samples from other uses of the run seed.
constexpr std::uint64_t kRedrawStream = 0x7265647261770000ULL;

std::string format_vector(std::span<const double> v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_number(v[i]);
  }
  return out + ")";
}

}  // namespace

std::vector<QuantileLevel> standard_levels(Formulation formulation,
                                           double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw Error("epsilon must be in (0, 0.5)");
  }
  const QuantileLevel top(1.0 - epsilon);
  switch (formulation) {
    case Formulation::F1:
      return {QuantileLevel(epsilon), top};
    case Formulation::F2:
      return {QuantileLevel(0.25), top};
    case Formulation::F3:
      return {QuantileLevel(0.45), top};
  }
  throw Error("unknown formulation");
}

std::vector<QuantileLevel> many_objective_levels(std::size_t count,
                                                 double epsilon) {
  if (count == 0) throw Error("level count must be positive");
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw Error("epsilon must be in (0, 0.5)");
  }
  std::vector<QuantileLevel> levels;
  levels.reserve(count);
  const double cap = 1.0 - epsilon;
  for (std::size_t i = 1; i <= count; ++i) {
    const double s = std::min(static_cast<double>(i) / count, cap);
    if (!levels.empty() && s <= levels.back().value()) {
      throw Error("too many levels for epsilon " + format_number(epsilon) +
                  ": level " + std::to_string(i) + " collapses onto 1 - epsilon");
    }
    levels.emplace_back(s);
  }
  return levels;
}

double default_epsilon(std::size_t mc_count) {
  return std::max(1.0 / static_cast<double>(mc_count), 1e-4);
}

RobustProblem::RobustProblem(RobustProblemSpec spec) : spec_(std::move(spec)) {
  if (!spec_.response) throw Error("robust problem has no response function");
  if (spec_.levels.empty()) throw Error("robust problem needs at least one level");
  for (std::size_t i = 1; i < spec_.levels.size(); ++i) {
    if (!(spec_.levels[i - 1] < spec_.levels[i])) {
      throw Error("quantile levels must be strictly increasing");
    }
  }
  if (spec_.mc_count < 2) throw Error("mc count must be at least 2");
  if (spec_.design_box.dim() == 0) throw Error("design box is empty");
  if (spec_.mc_mode == McMode::frozen) {
    frozen_ = uniform_mc(spec_.uncertainty_box, spec_.mc_count, spec_.seed);
  }
}

Ecdf RobustProblem::ecdf_over(std::span<const double> z,
                              const Matrix& samples) const {
  if (!spec_.design_box.contains(z)) {
    throw Error("design out of bounds: z = " + format_vector(z));
  }
  std::vector<double> values(samples.rows());
  for (std::size_t j = 0; j < samples.rows(); ++j) {
    const double y = spec_.response(z, samples.row(j));
    if (!std::isfinite(y)) {
      throw Error("non-finite response at z = " + format_vector(z) +
                  ", u = " + format_vector(samples.row(j)));
    }
    values[j] = y;
  }
  return Ecdf(std::move(values));
}

Ecdf RobustProblem::response_ecdf(std::span<const double> z,
                                  std::uint64_t draw_id) const {
  if (spec_.mc_mode == McMode::frozen) return ecdf_over(z, frozen_);
  return response_ecdf(z, spec_.mc_count, draw_id);
}

Ecdf RobustProblem::response_ecdf(std::span<const double> z, std::size_t count,
                                  std::uint64_t draw_id) const {
  Rng stream(spec_.seed, {kRedrawStream, draw_id});
  const Seed derived{stream()};
  return ecdf_over(z, uniform_mc(spec_.uncertainty_box, count, derived));
}

std::vector<double> RobustProblem::evaluate(std::span<const double> z,
                                            std::uint64_t draw_id) const {
  const Ecdf ecdf = response_ecdf(z, draw_id);
  std::vector<double> objectives;
  objectives.reserve(spec_.levels.size());
  for (const QuantileLevel& s : spec_.levels) {
    objectives.push_back(ecdf.quantile(s));
  }
  if (spec_.post_map) spec_.post_map(objectives);
  return objectives;
}

std::vector<double> RobustProblem::evaluate(std::span<const double> z) const {
  const std::uint64_t id =
      spec_.mc_mode == McMode::redrawn ? calls_->fetch_add(1) : 0;
  return evaluate(z, id);
}

}  // namespace quantopt
