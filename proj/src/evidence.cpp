#include "quantopt/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "quantopt/csv.hpp"
#include "quantopt/parallel.hpp"

namespace quantopt {

namespace {

std::string join_messages(const std::vector<BpaViolation>& violations) {
  std::string out = "invalid BPA: ";
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out += "; ";
    out += violations[i].message;
  }
  return out;
}

std::string where(std::size_t dim, std::size_t interval) {
  return "dimension " + std::to_string(dim) + ", interval " +
         std::to_string(interval);
}

}  // namespace

BpaError::BpaError(std::vector<BpaViolation> violations)
    : Error(join_messages(violations)), violations_(std::move(violations)) {}

Bpa Bpa::validate(std::vector<BpaDimension> raw) {
  using Kind = BpaViolation::Kind;
  std::vector<BpaViolation> violations;
  if (raw.empty()) {
    violations.push_back({Kind::empty_dimension, 0, 0, "no uncertain dimensions"});
  }
  for (std::size_t d = 0; d < raw.size(); ++d) {
    if (raw[d].empty()) {
      violations.push_back({Kind::empty_dimension, d, 0,
                            "dimension " + std::to_string(d) + " has no intervals"});
      continue;
    }
    double sum = 0.0;
    bool finite = true;
    for (std::size_t k = 0; k < raw[d].size(); ++k) {
      const auto& [interval, mass] = raw[d][k];
      if (!std::isfinite(interval.lo) || !std::isfinite(interval.hi) ||
          !std::isfinite(mass)) {
        violations.push_back({Kind::non_finite, d, k,
                              where(d, k) + ": non-finite value"});
        finite = false;
        continue;
      }
      if (mass < 0.0) {
        violations.push_back({Kind::negative_mass, d, k,
                              where(d, k) + ": negative mass " +
                                  format_number(mass)});
      }
      if (interval.lo > interval.hi) {
        violations.push_back({Kind::inverted_interval, d, k,
                              where(d, k) + ": inverted interval [" +
                                  format_number(interval.lo) + ", " +
                                  format_number(interval.hi) + "]"});
      }
      sum += mass;
    }
    if (finite && std::abs(sum - 1.0) > kMassSumTolerance) {
      violations.push_back({Kind::mass_sum, d, 0,
                            "dimension " + std::to_string(d) + ": mass sum " +
                                format_number(sum) + " != 1"});
    }
  }
  if (!violations.empty()) throw BpaError(std::move(violations));
  Bpa bpa;
  bpa.dims_ = std::move(raw);
  return bpa;
}

Bpa Bpa::replicate(const BpaDimension& dimension, std::size_t n) {
  return validate(std::vector<BpaDimension>(n, dimension));
}

BandSample bpa_to_cdf(const BpaDimension& dimension, double t) {
  t = std::clamp(t, 0.0, 1.0);
  std::size_t last = dimension.size();
  for (std::size_t k = 0; k < dimension.size(); ++k) {
    if (dimension[k].mass > 0.0) last = k;
  }
  double start = 0.0;
  std::size_t k = 0;
  for (; k < last; ++k) {
    const double mass = dimension[k].mass;
    if (mass > 0.0 && t < start + mass) break;
    start += mass;
  }
  const auto& [interval, mass] = dimension[k];
  const double fraction = std::clamp((t - start) / mass, 0.0, 1.0);
  const double u = interval.lo + fraction * (interval.hi - interval.lo);
  return {std::clamp(u, interval.lo, interval.hi), k};
}

std::vector<FocalElement> enumerate_focal_elements(const Bpa& bpa) {
  std::vector<FocalElement> out;
  std::vector<std::size_t> idx(bpa.dims(), 0);
  while (true) {
    std::vector<double> lower(bpa.dims()), upper(bpa.dims());
    double mass = 1.0;
    for (std::size_t d = 0; d < bpa.dims(); ++d) {
      const auto& mi = bpa.dimension(d)[idx[d]];
      lower[d] = mi.interval.lo;
      upper[d] = mi.interval.hi;
      mass *= mi.mass;
    }
    out.push_back({idx, Box(std::move(lower), std::move(upper)), mass});
    std::size_t d = bpa.dims();
    while (d > 0) {
      --d;
      if (++idx[d] < bpa.dimension(d).size()) break;
      idx[d] = 0;
      if (d == 0) return out;
    }
    if (bpa.dims() == 0) return out;
  }
}

std::size_t focal_element_id(const Bpa& bpa,
                             std::span<const std::size_t> intervals) {
  std::size_t id = 0;
  for (std::size_t d = 0; d < bpa.dims(); ++d) {
    id = id * bpa.dimension(d).size() + intervals[d];
  }
  return id;
}

TaggedSampling sample_tagged(const Bpa& bpa, std::size_t count, Seed seed,
                             const UncertainResponse& response,
                             std::size_t threads) {
  if (count == 0) throw Error("sample count must be positive");
  std::vector<TaggedSample> samples(count);
  parallel_for(count, threads, [&](std::size_t i) {
    Rng rng(seed, {i});
    TaggedSample& s = samples[i];
    s.u.resize(bpa.dims());
    std::vector<std::size_t> intervals(bpa.dims());
    for (std::size_t d = 0; d < bpa.dims(); ++d) {
      const BandSample b = bpa_to_cdf(bpa.dimension(d), rng.uniform());
      s.u[d] = b.u;
      intervals[d] = b.interval;
    }
    s.focal_element = focal_element_id(bpa, intervals);
    s.f = response(s.u);
    if (!std::isfinite(s.f)) {
      throw Error("non-finite response at sample " + std::to_string(i));
    }
  });
  std::stable_sort(samples.begin(), samples.end(),
                   [](const TaggedSample& a, const TaggedSample& b) {
                     return a.f < b.f;
                   });
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = samples[i].f;
  return {std::move(samples), Ecdf(std::move(values))};
}

std::vector<FocalRange> sampled_focal_ranges(
    std::span<const TaggedSample> samples, std::size_t focal_count) {
  std::vector<FocalRange> ranges(focal_count);
  for (const TaggedSample& s : samples) {
    if (s.focal_element >= focal_count) {
      throw Error("sample tagged with unknown focal element " +
                  std::to_string(s.focal_element));
    }
    FocalRange& r = ranges[s.focal_element];
    if (!r.observed) {
      r = {s.f, s.f, true};
    } else {
      r.min = std::min(r.min, s.f);
      r.max = std::max(r.max, s.f);
    }
  }
  return ranges;
}

namespace {

void check_masses(std::span<const FocalRange> ranges,
                  std::span<const double> masses) {
  if (ranges.size() != masses.size()) {
    throw Error("focal ranges and masses differ in length");
  }
}

// Sum of masses (in focal-element order) whose key value is <= nu.
double mass_below(std::span<const FocalRange> ranges,
                  std::span<const double> masses, double nu, bool use_max) {
  double total = 0.0;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (!ranges[i].observed) continue;
    const double key = use_max ? ranges[i].max : ranges[i].min;
    if (key <= nu) total += masses[i];
  }
  return total;
}

std::vector<Step> steps(std::span<const FocalRange> ranges,
                        std::span<const double> masses, bool use_max) {
  check_masses(ranges, masses);
  std::vector<double> locations;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (ranges[i].observed && masses[i] > 0.0) {
      locations.push_back(use_max ? ranges[i].max : ranges[i].min);
    }
  }
  std::sort(locations.begin(), locations.end());
  locations.erase(std::unique(locations.begin(), locations.end()),
                  locations.end());
  std::vector<Step> out;
  for (double x : locations) {
    out.push_back({x, mass_below(ranges, masses, x, use_max)});
  }
  return out;
}

}  // namespace

BeliefPlausibilityCurve curve_from_ranges(std::span<const FocalRange> ranges,
                                          std::span<const double> masses,
                                          std::span<const double> thresholds) {
  check_masses(ranges, masses);
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw Error("thresholds must be sorted ascending");
  }
  BeliefPlausibilityCurve curve;
  curve.thresholds.assign(thresholds.begin(), thresholds.end());
  curve.belief.reserve(thresholds.size());
  curve.plausibility.reserve(thresholds.size());
  for (double nu : thresholds) {
    curve.belief.push_back(mass_below(ranges, masses, nu, true));
    curve.plausibility.push_back(mass_below(ranges, masses, nu, false));
  }
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (!ranges[i].observed) curve.unresolved_mass += masses[i];
  }
  return curve;
}

BeliefPlausibilityCurve estimate_belief_plausibility(
    std::span<const TaggedSample> samples, std::span<const double> masses,
    std::span<const double> thresholds) {
  const auto ranges = sampled_focal_ranges(samples, masses.size());
  return curve_from_ranges(ranges, masses, thresholds);
}

BeliefPlausibilityCurve exact_belief_plausibility(
    const Bpa& bpa, std::span<const double> thresholds,
    const ExtremumOracle& oracle) {
  const auto elements = enumerate_focal_elements(bpa);
  std::vector<FocalRange> ranges(elements.size());
  std::vector<double> masses(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    masses[i] = elements[i].mass;
    if (elements[i].mass > 0.0) {
      ranges[i] = oracle(elements[i].box);
      ranges[i].observed = true;
    }
  }
  return curve_from_ranges(ranges, masses, thresholds);
}

ExtremumOracle mv1_extremum_oracle(std::vector<double> d) {
  for (double di : d) {
    if (!(di >= 0.0)) throw Error("mv1 oracle requires non-negative d");
  }
  return [d = std::move(d)](const Box& box) {
    if (box.dim() != d.size()) {
      throw Error("mv1 oracle: box dimension does not match d");
    }
    FocalRange r{0.0, 0.0, true};
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double lo = box.lower()[i];
      const double hi = box.upper()[i];
      const double lo2 = lo * lo;
      const double hi2 = hi * hi;
      r.max += d[i] * std::max(lo2, hi2);
      r.min += (lo <= 0.0 && 0.0 <= hi) ? 0.0 : d[i] * std::min(lo2, hi2);
    }
    return r;
  };
}

ExtremumOracle grid_extremum_oracle(UncertainResponse response,
                                    std::size_t points) {
  return [response = std::move(response), points](const Box& box) {
    const std::size_t dim = box.dim();
    const auto per_dim = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::llround(
               std::pow(static_cast<double>(points), 1.0 / dim))));
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> u(dim);
    FocalRange r;
    while (true) {
      for (std::size_t j = 0; j < dim; ++j) {
        const double frac = static_cast<double>(idx[j]) / (per_dim - 1);
        u[j] = box.lower()[j] + frac * box.width(j);
      }
      const double f = response(u);
      if (!r.observed) {
        r = {f, f, true};
      } else {
        r.min = std::min(r.min, f);
        r.max = std::max(r.max, f);
      }
      std::size_t j = dim;
      while (j > 0 && ++idx[j - 1] == per_dim) {
        idx[j - 1] = 0;
        --j;
      }
      if (j == 0) break;
    }
    return r;
  };
}

std::vector<Step> belief_steps(std::span<const FocalRange> ranges,
                               std::span<const double> masses) {
  return steps(ranges, masses, true);
}

std::vector<Step> plausibility_steps(std::span<const FocalRange> ranges,
                                     std::span<const double> masses) {
  return steps(ranges, masses, false);
}

void write_curve_csv(std::ostream& out, const BeliefPlausibilityCurve& curve) {
  CsvWriter csv(out);
  csv.row("nu", "belief", "plausibility", "unresolved_mass");
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
    csv.row(curve.thresholds[i], curve.belief[i], curve.plausibility[i],
            curve.unresolved_mass);
  }
}

}  // namespace quantopt
