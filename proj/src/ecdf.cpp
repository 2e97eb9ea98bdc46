#include "quantopt/ecdf.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "quantopt/csv.hpp"
#include "quantopt/error.hpp"

namespace quantopt {

QuantileLevel::QuantileLevel(double s) : s_(s) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error("level out of range");
}

Ecdf::Ecdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw Error("empty sample");
  for (double v : sorted_) {
    if (!std::isfinite(v)) throw Error("non-finite sample");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::eval(double x) const {
  const auto count = static_cast<std::size_t>(
      std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin());
  return static_cast<double>(count) / static_cast<double>(sorted_.size());
}

double Ecdf::quantile(QuantileLevel level) const {
  const double s = level.value();
  const std::size_t n = sorted_.size();
  const double nd = static_cast<double>(n);
  // Smallest k in [1, n] with k/n >= s. ceil(s*n) can be off by one in
  // floating point, so settle k against the same k/n that eval() produces.
  auto k = static_cast<std::size_t>(std::clamp(std::ceil(s * nd), 1.0, nd));
  while (k > 1 && static_cast<double>(k - 1) / nd >= s) --k;
  while (k < n && static_cast<double>(k) / nd < s) ++k;
  return sorted_[k - 1];
}

std::vector<double> cdf_envelope(std::span<const Ecdf> curves,
                                 std::span<const double> grid) {
  if (curves.empty()) throw Error("envelope needs at least one curve");
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw Error("envelope grid must be sorted ascending");
  }
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (const Ecdf& curve : curves) {
      out[i] = std::max(out[i], curve.eval(grid[i]));
    }
  }
  return out;
}

void write_ecdf_csv(std::ostream& out, const Ecdf& ecdf) {
  CsvWriter csv(out);
  csv.row("q", "F");
  const auto values = ecdf.sorted_values();
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    csv.row(values[i], static_cast<double>(i + 1) / n);
  }
}

}  // namespace quantopt
