#ifndef QUANTOPT_ECDF_HPP_
#define QUANTOPT_ECDF_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace quantopt {

// A probability level s in [0, 1].
class QuantileLevel {
 public:
  // Throws Error("level out of range") unless 0 <= s <= 1.
  explicit QuantileLevel(double s);
  double value() const { return s_; }
  auto operator<=>(const QuantileLevel&) const = default;

 private:
  double s_;
};

// Empirical cumulative distribution function of a finite sample.
//
// Holds the order statistics x_(1) <= ... <= x_(n). The value at x is the
// fraction of samples <= x, so the function is a right-continuous step
// function with range {0, 1/n, ..., 1}. Immutable once built.
class Ecdf {
 public:
  // Throws Error("empty sample") or Error("non-finite sample").
  explicit Ecdf(std::vector<double> samples);
  explicit Ecdf(std::span<const double> samples)
      : Ecdf(std::vector<double>(samples.begin(), samples.end())) {}

  std::size_t size() const { return sorted_.size(); }
  std::span<const double> sorted_values() const { return sorted_; }
  double min() const { return sorted_.front(); }
  double max() const { return sorted_.back(); }

  // Fraction of samples <= x.
  double eval(double x) const;

  // Generalized inverse: the smallest order statistic q with eval(q) >= s.
  // Level 0 maps to the sample minimum. Never interpolates.
  double quantile(QuantileLevel s) const;
  double quantile(double s) const { return quantile(QuantileLevel(s)); }

 private:
  std::vector<double> sorted_;
};

// Pointwise upper envelope max_k F_k(x) evaluated on an ascending grid.
// Throws Error on an empty curve list or an unsorted grid.
std::vector<double> cdf_envelope(std::span<const Ecdf> curves,
                                 std::span<const double> grid);

// Two-column CSV with header "q,F": one row per order statistic x_(i) with
// cumulative probability i/n.
void write_ecdf_csv(std::ostream& out, const Ecdf& ecdf);

}  // namespace quantopt

#endif  // QUANTOPT_ECDF_HPP_
