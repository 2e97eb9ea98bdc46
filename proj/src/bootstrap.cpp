#include "quantopt/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quantopt/error.hpp"
#include "quantopt/parallel.hpp"

namespace quantopt {

namespace {

constexpr double kCentralLow = 0.16;
constexpr double kCentralHigh = 0.84;

}  // namespace

BootstrapResult subsample_bootstrap(std::span<const double> samples,
                                    QuantileLevel level, std::size_t m,
                                    std::size_t replicates, Seed seed,
                                    const BootstrapOptions& options) {
  const std::size_t n = samples.size();
  if (n < 2) throw Error("bootstrap needs at least 2 samples");
  if (replicates < 100) throw Error("bootstrap needs at least 100 replicates");
  if (m < 1 || m > n) {
    throw Error("sub-sample size " + std::to_string(m) + " outside [1, " +
                std::to_string(n) + "]");
  }

  BootstrapResult result;
  result.level = level;
  result.subsample_size = m;
  result.observed = Ecdf(samples).quantile(level);
  result.replicates.resize(replicates);

  const std::size_t copies = options.materialize_replicated ? n / m : 1;
  parallel_for(replicates, options.threads, [&](std::size_t r) {
    Rng rng(seed, {r});
    std::vector<double> draw;
    draw.reserve(m * copies);
    for (std::size_t i = 0; i < m; ++i) {
      const double v = samples[rng.below(n)];
      draw.insert(draw.end(), copies, v);
    }
    result.replicates[r] = Ecdf(std::move(draw)).quantile(level);
  });

  const Ecdf spread(result.replicates);
  result.se_hat =
      0.5 * (spread.quantile(kCentralHigh) - spread.quantile(kCentralLow));
  for (double q : result.replicates) {
    result.me_hat = std::max(result.me_hat, std::abs(q - result.observed));
  }
  return result;
}

BootstrapResult bootstrap_quantile(std::span<const double> samples,
                                   QuantileLevel level, std::size_t replicates,
                                   Seed seed, const BootstrapOptions& options) {
  return subsample_bootstrap(samples, level, samples.size(), replicates, seed,
                             options);
}

std::vector<ErrorRow> error_vs_samples(std::span<const double> samples,
                                       QuantileLevel level,
                                       std::span<const std::size_t> m_grid,
                                       std::size_t replicates, Seed seed,
                                       const BootstrapOptions& options) {
  if (m_grid.empty()) throw Error("m grid is empty");
  if (!std::is_sorted(m_grid.begin(), m_grid.end())) {
    throw Error("m grid must be sorted ascending");
  }
  std::vector<ErrorRow> rows;
  rows.reserve(m_grid.size());
  for (std::size_t m : m_grid) {
    const auto r =
        subsample_bootstrap(samples, level, m, replicates, seed, options);
    rows.push_back({m, r.se_hat, r.me_hat});
  }
  return rows;
}

}  // namespace quantopt
