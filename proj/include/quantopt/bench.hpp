#ifndef QUANTOPT_BENCH_HPP_
#define QUANTOPT_BENCH_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "quantopt/sampling.hpp"

namespace quantopt {

// Sum-of-Gaussian-bumps test function
//   q(x) = 1 - sum_i a_i exp(-beta_i * sum_j (x_j - c_ij)^2).
struct BumpParams {
  std::vector<double> amplitude;             // a_i
  std::vector<double> width;                 // beta_i > 0
  std::vector<std::vector<double>> centers;  // c_i, one row per bump

  std::size_t bumps() const { return amplitude.size(); }
  std::size_t dim() const { return centers.empty() ? 0 : centers[0].size(); }

  // Throws Error on inconsistent sizes or a non-positive width.
  void validate() const;

  // One-dimensional four-bump landscape: a broad bump at 2.5, a deep
  // narrow one at 1.0 and a narrow pair at 4.0 / 4.2.
  static BumpParams illustrative();
};

// The design/uncertainty ranges of the illustrative bump problem:
// z in [0, 5], u in [-0.25, 0.25].
Box bump_design_box();
Box bump_uncertainty_box();

double eval_bump(const BumpParams& params, std::span<const double> x);

// Bump response with additive uncertainty, evaluated at x = z + u.
double eval_bump(const BumpParams& params, std::span<const double> z,
                 std::span<const double> u);

// f = (1/n) sum (2 pi - u_i) cos(u_i - d_i).
double eval_mv4(std::span<const double> d, std::span<const double> u);

// f = sum d_i u_i^2.
double eval_mv1(std::span<const double> d, std::span<const double> u);

enum class MvId { mv1, mv4 };

struct MvSpec {
  MvId id;
  std::size_t n;
  Box design_box;
  Box uncertainty_box;
};

// MV4: d in [0, 2 pi]^n, u in [0, 3]^n. MV1: d in [1, 5]^n, u in [-5, 3]^n.
MvSpec mv_spec(MvId id, std::size_t n);

struct ReferenceSolution {
  std::vector<double> design;
  std::vector<double> uncertainty;
  double value;
};

struct Mv4References {
  ReferenceSolution min;      // min over d and u
  ReferenceSolution minimax;  // min over d of max over u
};

// Analytic MV4 optima; identical in every dimension. The min design is
// d = pi (the 3.1416 usually quoted is its rounding); the minimax design
// 4.6638 has no closed form and is kept as a literal.
Mv4References mv4_reference_solutions(std::size_t n = 1);

inline constexpr double kMv4MinValue = -6.283185;
inline constexpr double kMv4MinimaxValue = -0.305173;
inline constexpr double kMv4MinimaxDesign = 4.6638;

struct FrontPoint {
  std::vector<double> design;
  std::vector<double> objectives;
};

using FrontEvaluator =
    std::function<std::vector<double>(std::span<const double> design)>;

inline constexpr std::size_t kDefaultComposeCap = 1000000;

// Builds an n-dimensional front from a one-dimensional one: every multiset
// of n designs drawn from `front_1d` becomes a candidate (sorted
// coordinates; the objectives are assumed permutation-invariant), is
// evaluated with `evaluator`, and the non-dominated candidates are
// returned. Throws Error if the number of candidates exceeds `max_candidates`.
std::vector<FrontPoint> compose_front_from_1d(
    std::span<const FrontPoint> front_1d, std::size_t n,
    const FrontEvaluator& evaluator,
    std::size_t max_candidates = kDefaultComposeCap, std::size_t threads = 1);

// Number of size-n multisets from k items, saturating at SIZE_MAX.
std::size_t multiset_count(std::size_t k, std::size_t n);

}  // namespace quantopt

#endif  // QUANTOPT_BENCH_HPP_
