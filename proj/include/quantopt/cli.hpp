#ifndef QUANTOPT_CLI_HPP_
#define QUANTOPT_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace quantopt::cli {

// Tool version string baked in at build time.
const char* version();

// The commands understood by run(): ecdf, optimize, bootstrap, evidence,
// bench.
const std::vector<std::string>& commands();

struct RunOptions {
  std::string command;
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;        // overrides mc.seed
  std::optional<std::filesystem::path> out;  // overrides output.directory
  std::size_t threads = 1;                   // wall time only
};

struct RunSummary {
  std::filesystem::path directory;
  std::vector<std::string> files;  // written, in order
};

// Executes one command. Outputs are fully computed before anything is
// written; if writing fails, files already written by this run are
// removed. Throws Error with a message naming the offending config key.
RunSummary run(const RunOptions& options);

// Command-line entry point: parses arguments, runs, reports errors on
// `err`. Returns the process exit code.
int main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace quantopt::cli

#endif  // QUANTOPT_CLI_HPP_
