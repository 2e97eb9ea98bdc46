#ifndef QUANTOPT_SRC_CLI_CONFIG_HPP_
#define QUANTOPT_SRC_CLI_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "quantopt/bench.hpp"
#include "quantopt/bootstrap.hpp"
#include "quantopt/ecdf.hpp"
#include "quantopt/evidence.hpp"
#include "quantopt/moga.hpp"
#include "quantopt/robust_problem.hpp"

namespace quantopt::cli {

enum class ProblemId { bump, mv1, mv4 };

struct ProblemConfig {
  ProblemId id = ProblemId::bump;
  std::string name;
  std::size_t n = 1;
  BumpParams bump;
  Box design_box;
  Box uncertainty_box;
  std::vector<double> design;  // empty unless given

  // y(z, u) for this problem.
  Response response() const;
};

struct QuantileConfig {
  std::vector<QuantileLevel> levels;
};

struct McConfig {
  std::size_t count = 0;
  McMode mode = McMode::frozen;
};

struct SampleSource {
  enum class Kind { uniform, response, values, file };
  Kind kind = Kind::uniform;
  std::size_t count = 1000;
  double lower = 0.0;
  double upper = 1.0;
  std::vector<double> values;
  std::filesystem::path path;
  std::size_t column = 0;
};

struct BootstrapConfig {
  std::size_t replicates = kDefaultReplicates;
  std::vector<std::size_t> m_grid;  // empty: the full sample size
  double level = 0.5;
  SampleSource samples;
  bool dump_replicates = false;
};

struct EvidenceConfig {
  enum class Exact { automatic, grid, none };
  std::vector<BpaDimension> dimensions;
  std::vector<double> thresholds;
  std::size_t count = 100000;
  Exact exact = Exact::automatic;
  std::size_t grid_points = 10000;
};

struct BenchConfig {
  std::size_t points = 501;
};

struct OutputConfig {
  std::optional<std::filesystem::path> directory;
  bool manifest = true;
};

struct RunConfig {
  nlohmann::json raw;
  std::string hash;  // FNV-1a of the canonical JSON text, 16 hex digits
  std::uint64_t seed = 0;
  std::optional<ProblemConfig> problem;
  std::optional<QuantileConfig> quantiles;
  std::optional<McConfig> mc;
  std::optional<GaConfig> ga;
  std::optional<BootstrapConfig> bootstrap;
  std::optional<EvidenceConfig> evidence;
  std::optional<BenchConfig> bench;
  OutputConfig output;
};

// Validates a parsed document. Relative file paths resolve against
// `base_dir`. Throws Error naming the offending key.
RunConfig parse_config(const nlohmann::json& doc,
                       const std::filesystem::path& base_dir);

// Reads and parses a config file; syntax errors carry line and column.
RunConfig load_config(const std::filesystem::path& path);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);

}  // namespace quantopt::cli

#endif  // QUANTOPT_SRC_CLI_CONFIG_HPP_
