#ifndef QUANTOPT_BOOTSTRAP_HPP_
#define QUANTOPT_BOOTSTRAP_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "quantopt/ecdf.hpp"
#include "quantopt/sampling.hpp"

namespace quantopt {

inline constexpr std::size_t kDefaultReplicates = 2000;

struct BootstrapResult {
  QuantileLevel level{0.5};
  std::size_t subsample_size = 0;  // values drawn per replicate
  std::vector<double> replicates;  // replicate quantiles, in replicate order
  double observed = 0.0;           // quantile of the original sample
  double se_hat = 0.0;  // half-width of the central 68% replicate interval
  double me_hat = 0.0;  // max |replicate - observed|
};

struct BootstrapOptions {
  std::size_t threads = 1;
  // Replicate each drawn value floor(n / m) times before taking the
  // quantile. The ECDF of a k-fold replicated sample equals that of the
  // sample itself, so results are identical; kept to demonstrate that.
  bool materialize_replicated = false;
};

// B resamples of size n with replacement. Requires n >= 2 and B >= 100.
BootstrapResult bootstrap_quantile(std::span<const double> samples,
                                   QuantileLevel level, std::size_t replicates,
                                   Seed seed, const BootstrapOptions& options = {});

// As bootstrap_quantile, but each resample draws m <= n values. m = n gives
// exactly bootstrap_quantile for the same seed.
BootstrapResult subsample_bootstrap(std::span<const double> samples,
                                    QuantileLevel level, std::size_t m,
                                    std::size_t replicates, Seed seed,
                                    const BootstrapOptions& options = {});

struct ErrorRow {
  std::size_t m;
  double se_hat;
  double me_hat;
};

// One sub-sample bootstrap per entry of m_grid (ascending, within [1, n]).
std::vector<ErrorRow> error_vs_samples(std::span<const double> samples,
                                       QuantileLevel level,
                                       std::span<const std::size_t> m_grid,
                                       std::size_t replicates, Seed seed,
                                       const BootstrapOptions& options = {});

}  // namespace quantopt

#endif  // QUANTOPT_BOOTSTRAP_HPP_
