#ifndef QUANTOPT_EVIDENCE_HPP_
#define QUANTOPT_EVIDENCE_HPP_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quantopt/ecdf.hpp"
#include "quantopt/error.hpp"
#include "quantopt/sampling.hpp"

namespace quantopt {

struct Interval {
  double lo;
  double hi;
};

// One expert-assigned interval of an uncertain variable and its mass.
struct MassInterval {
  Interval interval;
  double mass;
};

using BpaDimension = std::vector<MassInterval>;

struct BpaViolation {
  enum class Kind { empty_dimension, negative_mass, mass_sum, inverted_interval, non_finite };
  Kind kind;
  std::size_t dimension;
  std::size_t interval;  // offending interval; unused for dimension-level kinds
  std::string message;
};

// Thrown by Bpa::validate with every violation found.
class BpaError : public Error {
 public:
  explicit BpaError(std::vector<BpaViolation> violations);
  const std::vector<BpaViolation>& violations() const { return violations_; }

 private:
  std::vector<BpaViolation> violations_;
};

inline constexpr double kMassSumTolerance = 1e-9;

// Basic probability assignment: per uncertain dimension, a list of
// (possibly overlapping) intervals with non-negative masses summing to 1.
class Bpa {
 public:
  // Throws BpaError listing all violations.
  static Bpa validate(std::vector<BpaDimension> raw);

  std::size_t dims() const { return dims_.size(); }
  const BpaDimension& dimension(std::size_t i) const { return dims_[i]; }

  // The same one-dimensional assignment on each of n dimensions.
  static Bpa replicate(const BpaDimension& dimension, std::size_t n);

 private:
  std::vector<BpaDimension> dims_;
};

struct BandSample {
  double u;
  std::size_t interval;
};

// Inverse of the CDF that stacks the intervals of one dimension in listed
// order with band widths equal to their masses: t in the k-th band maps
// affinely onto the k-th interval. A t on a band boundary belongs to the
// next non-empty band. t is clamped to [0, 1].
BandSample bpa_to_cdf(const BpaDimension& dimension, double t);

// Cartesian product of one interval per dimension with positive mass.
struct FocalElement {
  std::vector<std::size_t> intervals;  // per-dimension interval index
  Box box;
  double mass;
};

// All focal elements in mixed-radix order of their interval indices (the
// last dimension varies fastest). Zero-mass products are listed too so the
// id of an index tuple is stable; they simply never get sampled.
std::vector<FocalElement> enumerate_focal_elements(const Bpa& bpa);

// Mixed-radix id matching enumerate_focal_elements.
std::size_t focal_element_id(const Bpa& bpa,
                             std::span<const std::size_t> intervals);

struct TaggedSample {
  std::vector<double> u;
  std::size_t focal_element;
  double f;
};

using UncertainResponse = std::function<double(std::span<const double> u)>;

struct TaggedSampling {
  std::vector<TaggedSample> samples;  // sorted by f (ECDF order)
  Ecdf ecdf;
};

// Draws t ~ U[0, 1) per dimension from stream (seed, sample index), maps it
// through bpa_to_cdf, tags the sample with its focal element at generation
// time, evaluates the response and sorts by response value.
TaggedSampling sample_tagged(const Bpa& bpa, std::size_t count, Seed seed,
                             const UncertainResponse& response,
                             std::size_t threads = 1);

// Response range over one focal element.
struct FocalRange {
  double min = 0.0;
  double max = 0.0;
  bool observed = false;
};

// Sampled min / max of f per focal element id.
std::vector<FocalRange> sampled_focal_ranges(
    std::span<const TaggedSample> samples, std::size_t focal_count);

// Belief and plausibility of the proposition f <= nu on a threshold grid.
struct BeliefPlausibilityCurve {
  std::vector<double> thresholds;
  std::vector<double> belief;
  std::vector<double> plausibility;
  double unresolved_mass = 0.0;  // mass of focal elements never observed
};

// Bel(nu) = sum of masses of focal elements whose max <= nu;
// Pl(nu) = sum of masses of focal elements whose min <= nu. Unobserved
// focal elements contribute to neither. Throws Error on unsorted thresholds.
BeliefPlausibilityCurve curve_from_ranges(std::span<const FocalRange> ranges,
                                          std::span<const double> masses,
                                          std::span<const double> thresholds);

// Sample-based estimate: per focal element, the sampled max stands in for
// the true max (belief) and the sampled min for the true min
// (plausibility). Sampled extrema lie inside the true range, so the
// estimated belief is never below the exact one.
BeliefPlausibilityCurve estimate_belief_plausibility(
    std::span<const TaggedSample> samples, std::span<const double> masses,
    std::span<const double> thresholds);

// Response range over a box.
using ExtremumOracle = std::function<FocalRange(const Box& box)>;

// Exact curves from true per-focal-element extrema.
BeliefPlausibilityCurve exact_belief_plausibility(
    const Bpa& bpa, std::span<const double> thresholds,
    const ExtremumOracle& oracle);

// Analytic range of f = sum d_i u_i^2 over a box, for d_i >= 0.
ExtremumOracle mv1_extremum_oracle(std::vector<double> d);

// Approximate range from a regular grid of about `points` nodes per box.
ExtremumOracle grid_extremum_oracle(UncertainResponse response,
                                    std::size_t points = 10000);

// A jump of a belief or plausibility step function.
struct Step {
  double location;
  double height;  // cumulative value from `location` on
};

// Steps of Bel and Pl implied by per-focal-element ranges.
std::vector<Step> belief_steps(std::span<const FocalRange> ranges,
                               std::span<const double> masses);
std::vector<Step> plausibility_steps(std::span<const FocalRange> ranges,
                                     std::span<const double> masses);

// CSV with header "nu,belief,plausibility,unresolved_mass".
void write_curve_csv(std::ostream& out, const BeliefPlausibilityCurve& curve);

}  // namespace quantopt

#endif  // QUANTOPT_EVIDENCE_HPP_
