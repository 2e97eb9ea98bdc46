#ifndef QUANTOPT_TESTS_TEST_UTIL_HPP_
#define QUANTOPT_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace quantopt::test {

// Independent of the library's generator so oracles never share its path.
inline std::vector<double> uniform_samples(std::size_t n, std::uint64_t seed,
                                           double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(n);
  for (double& v : out) v = dist(gen);
  return out;
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace quantopt::test

#endif  // QUANTOPT_TESTS_TEST_UTIL_HPP_
