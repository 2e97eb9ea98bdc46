#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "quantopt/bootstrap.hpp"
#include "quantopt/cli.hpp"
#include "quantopt/csv.hpp"
#include "quantopt/error.hpp"

namespace quantopt::cli {

using nlohmann::json;

namespace {

// Keeps bootstrap resampling independent of the sample it resamples.
constexpr std::uint64_t kBootstrapStream = 0x626f6f7473747270ULL;

struct Artifact {
  std::string name;
  std::string content;
};

// Collects the CSV outputs of one command, each stamped with the same
// provenance line.
class Artifacts {
 public:
  explicit Artifacts(std::string provenance) : provenance_(std::move(provenance)) {}

  void add(std::string name, const std::function<void(std::ostream&)>& body) {
    std::ostringstream out;
    CsvWriter(out).comment(provenance_);
    body(out);
    items_.push_back({std::move(name), out.str()});
  }

  std::vector<Artifact>& items() { return items_; }

 private:
  std::string provenance_;
  std::vector<Artifact> items_;
};

template <class T>
const T& need(const std::optional<T>& section, const char* key) {
  if (!section) throw Error(std::string("missing required key '") + key + "'");
  return *section;
}

std::size_t need_mc_count(const RunConfig& cfg) {
  const McConfig& mc = need(cfg.mc, "mc");
  if (mc.count == 0) throw Error("missing required key 'mc.count'");
  return mc.count;
}

const std::vector<double>& need_design(const ProblemConfig& p) {
  if (p.design.empty()) throw Error("missing required key 'problem.design'");
  return p.design;
}

RobustProblem make_problem(const RunConfig& cfg, std::vector<QuantileLevel> levels) {
  const ProblemConfig& p = need(cfg.problem, "problem");
  RobustProblemSpec spec;
  spec.design_box = p.design_box;
  spec.uncertainty_box = p.uncertainty_box;
  spec.response = p.response();
  spec.levels = std::move(levels);
  spec.mc_count = need_mc_count(cfg);
  spec.mc_mode = cfg.mc->mode;
  spec.seed = Seed{cfg.seed};
  return RobustProblem(std::move(spec));
}

void numbered_header(CsvWriter& csv, const char* prefix, std::size_t count) {
  for (std::size_t i = 1; i <= count; ++i) {
    csv.cell(std::string(prefix) + "_" + std::to_string(i));
  }
}

void ecdf_body(std::ostream& out, const Ecdf& e) { write_ecdf_csv(out, e); }

void cmd_ecdf(const RunConfig& cfg, std::size_t, Artifacts& artifacts) {
  const ProblemConfig& p = need(cfg.problem, "problem");
  const auto& z = need_design(p);
  const RobustProblem problem = make_problem(cfg, {QuantileLevel(0.5)});
  const Ecdf e = problem.response_ecdf(z);
  artifacts.add("ecdf.csv", [&](std::ostream& out) { ecdf_body(out, e); });
}

void cmd_optimize(const RunConfig& cfg, std::size_t threads, Artifacts& artifacts) {
  const QuantileConfig& q = need(cfg.quantiles, "quantiles");
  const RobustProblem problem = make_problem(cfg, q.levels);
  GaConfig ga = cfg.ga.value_or(GaConfig{});
  ga.seed = Seed{cfg.seed};
  const MogaResult result = run_moga(problem, ga, threads);

  const std::size_t n = problem.design_box().dim();
  const std::size_t k = problem.objective_count();
  auto sorted = [](std::vector<Individual> members) {
    std::sort(members.begin(), members.end(), [](const auto& a, const auto& b) {
      return a.objectives != b.objectives ? a.objectives < b.objectives
                                          : a.genome < b.genome;
    });
    return members;
  };
  auto header = [&](CsvWriter& csv) {
    numbered_header(csv, "design", n);
    numbered_header(csv, "objective", k);
  };

  const auto front = sorted(result.archive.members());
  artifacts.add("front.csv", [&](std::ostream& out) {
    CsvWriter csv(out);
    header(csv);
    csv.end_row();
    for (const auto& m : front) {
      csv.cells(m.genome);
      csv.cells(m.objectives);
      csv.end_row();
    }
  });
  artifacts.add("history.csv", [&](std::ostream& out) {
    CsvWriter csv(out);
    csv.cell("generation");
    header(csv);
    csv.end_row();
    for (std::size_t g = 0; g < result.history.size(); ++g) {
      for (const auto& m : sorted(result.history[g])) {
        csv.cell(g);
        csv.cells(m.genome);
        csv.cells(m.objectives);
        csv.end_row();
      }
    }
  });

  // The two ends of the front: best lowest quantile, best highest quantile.
  auto extreme = [&](std::size_t objective) {
    return *std::min_element(front.begin(), front.end(), [&](const auto& a, const auto& b) {
      return a.objectives[objective] < b.objectives[objective];
    });
  };
  const Individual best = extreme(0);
  const Individual robust = extreme(k - 1);
  const Ecdf best_ecdf = problem.response_ecdf(best.genome);
  const Ecdf robust_ecdf = problem.response_ecdf(robust.genome);
  artifacts.add("ecdf_best.csv", [&](std::ostream& out) { ecdf_body(out, best_ecdf); });
  artifacts.add("ecdf_most_robust.csv",
                [&](std::ostream& out) { ecdf_body(out, robust_ecdf); });
}

std::vector<double> load_samples(const RunConfig& cfg, const SampleSource& src) {
  switch (src.kind) {
    case SampleSource::Kind::uniform: {
      const Matrix m = uniform_mc(Box({src.lower}, {src.upper}), src.count, Seed{cfg.seed});
      return {m.data().begin(), m.data().end()};
    }
    case SampleSource::Kind::response: {
      const ProblemConfig& p = need(cfg.problem, "problem");
      const auto& z = need_design(p);
      const auto e = make_problem(cfg, {QuantileLevel(0.5)}).response_ecdf(z);
      return {e.sorted_values().begin(), e.sorted_values().end()};
    }
    case SampleSource::Kind::values:
      return src.values;
    case SampleSource::Kind::file: {
      std::ifstream in(src.path);
      if (!in) throw Error("bootstrap.samples.path: cannot open " + src.path.string());
      CsvTable table;
      try {
        table = read_numeric_csv(in);
      } catch (const Error& e) {
        throw Error(src.path.string() + ": " + e.what());
      }
      std::vector<double> out;
      for (const auto& row : table.rows) {
        if (src.column >= row.size()) {
          throw Error("bootstrap.samples.column: " + src.path.string() + " has only " +
                      std::to_string(row.size()) + " columns");
        }
        out.push_back(row[src.column]);
      }
      if (out.size() < 2) throw Error(src.path.string() + ": need at least 2 samples");
      return out;
    }
  }
  throw Error("unknown sample source");
}

void cmd_bootstrap(const RunConfig& cfg, std::size_t threads, Artifacts& artifacts) {
  const BootstrapConfig& b = need(cfg.bootstrap, "bootstrap");
  const std::vector<double> samples = load_samples(cfg, b.samples);
  std::vector<std::size_t> grid = b.m_grid;
  if (grid.empty()) grid.push_back(samples.size());
  for (std::size_t m : grid) {
    if (m > samples.size()) {
      throw Error("bootstrap.m_grid: " + std::to_string(m) + " exceeds the " +
                  std::to_string(samples.size()) + " available samples");
    }
  }
  const Seed seed{Rng(Seed{cfg.seed}, {kBootstrapStream})()};
  BootstrapOptions options;
  options.threads = threads;
  std::vector<BootstrapResult> results;
  for (std::size_t m : grid) {
    results.push_back(
        subsample_bootstrap(samples, QuantileLevel(b.level), m, b.replicates, seed, options));
  }
  artifacts.add("bootstrap.csv", [&](std::ostream& out) {
    CsvWriter csv(out);
    csv.row("m", "level", "observed", "se_hat", "me_hat");
    for (const auto& r : results) {
      csv.row(r.subsample_size, r.level.value(), r.observed, r.se_hat, r.me_hat);
    }
  });
  if (b.dump_replicates) {
    artifacts.add("replicates.csv", [&](std::ostream& out) {
      CsvWriter csv(out);
      csv.row("m", "replicate", "quantile");
      for (const auto& r : results) {
        for (std::size_t i = 0; i < r.replicates.size(); ++i) {
          csv.row(r.subsample_size, i, r.replicates[i]);
        }
      }
    });
  }
}

void cmd_evidence(const RunConfig& cfg, std::size_t threads, Artifacts& artifacts) {
  const ProblemConfig& p = need(cfg.problem, "problem");
  const EvidenceConfig& e = need(cfg.evidence, "evidence");
  const std::vector<double> design = need_design(p);
  const Bpa bpa = Bpa::validate(e.dimensions);
  const Response response = p.response();
  const UncertainResponse f = [&](std::span<const double> u) {
    return response(design, u);
  };

  const auto sampling = sample_tagged(bpa, e.count, Seed{cfg.seed}, f, threads);
  std::vector<double> masses;
  for (const auto& fe : enumerate_focal_elements(bpa)) masses.push_back(fe.mass);
  const auto ranges = sampled_focal_ranges(sampling.samples, masses.size());
  const auto estimate = curve_from_ranges(ranges, masses, e.thresholds);

  std::optional<BeliefPlausibilityCurve> exact;
  std::vector<FocalRange> exact_ranges;
  const bool analytic = p.id == ProblemId::mv1 &&
                        std::all_of(design.begin(), design.end(),
                                    [](double d) { return d >= 0.0; });
  if (e.exact != EvidenceConfig::Exact::none) {
    const ExtremumOracle oracle =
        (e.exact == EvidenceConfig::Exact::automatic && analytic)
            ? mv1_extremum_oracle(design)
            : grid_extremum_oracle(f, e.grid_points);
    const auto elements = enumerate_focal_elements(bpa);
    exact_ranges.resize(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (elements[i].mass > 0.0) exact_ranges[i] = oracle(elements[i].box);
      exact_ranges[i].observed = elements[i].mass > 0.0;
    }
    exact = curve_from_ranges(exact_ranges, masses, e.thresholds);
  }

  artifacts.add("curve.csv", [&](std::ostream& out) {
    CsvWriter csv(out);
    if (exact) {
      csv.row("nu", "belief", "plausibility", "exact_belief", "exact_plausibility",
              "unresolved_mass");
    } else {
      csv.row("nu", "belief", "plausibility", "unresolved_mass");
    }
    for (std::size_t i = 0; i < e.thresholds.size(); ++i) {
      if (exact) {
        csv.row(e.thresholds[i], estimate.belief[i], estimate.plausibility[i],
                exact->belief[i], exact->plausibility[i], estimate.unresolved_mass);
      } else {
        csv.row(e.thresholds[i], estimate.belief[i], estimate.plausibility[i],
                estimate.unresolved_mass);
      }
    }
  });
  artifacts.add("steps.csv", [&](std::ostream& out) {
    CsvWriter csv(out);
    csv.row("source", "curve", "location", "height");
    auto emit = [&](const char* source, const std::vector<FocalRange>& r) {
      for (const Step& s : belief_steps(r, masses)) {
        csv.row(source, "belief", s.location, s.height);
      }
      for (const Step& s : plausibility_steps(r, masses)) {
        csv.row(source, "plausibility", s.location, s.height);
      }
    };
    emit("estimated", ranges);
    if (exact) emit(analytic && e.exact == EvidenceConfig::Exact::automatic ? "exact" : "grid",
                    exact_ranges);
  });
}

void cmd_bench(const RunConfig& cfg, std::size_t, Artifacts& artifacts) {
  const ProblemConfig& p = need(cfg.problem, "problem");
  const BenchConfig bench = cfg.bench.value_or(BenchConfig{});
  if (p.id == ProblemId::mv4) {
    const auto refs = mv4_reference_solutions(p.n);
    artifacts.add("references.csv", [&](std::ostream& out) {
      CsvWriter csv(out);
      csv.row("reference", "n", "d", "u", "f");
      csv.row("min", p.n, refs.min.design[0], refs.min.uncertainty[0], refs.min.value);
      csv.row("minimax", p.n, refs.minimax.design[0], refs.minimax.uncertainty[0],
              refs.minimax.value);
    });
  }
  // Response along the design-box diagonal at the nominal uncertainty: the
  // point of the uncertainty box closest to the origin.
  std::vector<double> u(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    u[i] = std::clamp(0.0, p.uncertainty_box.lower()[i], p.uncertainty_box.upper()[i]);
  }
  const Response response = p.response();
  artifacts.add("profile.csv", [&](std::ostream& out) {
    CsvWriter csv(out);
    numbered_header(csv, "design", p.n);
    csv.cell("f");
    csv.end_row();
    std::vector<double> z(p.n);
    for (std::size_t j = 0; j < bench.points; ++j) {
      const double t = static_cast<double>(j) / static_cast<double>(bench.points - 1);
      for (std::size_t i = 0; i < p.n; ++i) {
        z[i] = j + 1 == bench.points ? p.design_box.upper()[i]
                                     : p.design_box.lower()[i] + t * p.design_box.width(i);
      }
      csv.cells(z);
      csv.cell(response(z, u));
      csv.end_row();
    }
  });
}

using Command = void (*)(const RunConfig&, std::size_t, Artifacts&);

const std::map<std::string, Command>& command_table() {
  static const std::map<std::string, Command> table{
      {"bench", cmd_bench},         {"bootstrap", cmd_bootstrap}, {"ecdf", cmd_ecdf},
      {"evidence", cmd_evidence},   {"optimize", cmd_optimize},
  };
  return table;
}

void write_all(const std::filesystem::path& dir, const std::vector<Artifact>& items,
               std::vector<std::string>& written) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  try {
    for (const Artifact& a : items) {
      const auto path = dir / a.name;
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (out) written.push_back(a.name);
      out << a.content;
      out.close();
      if (!out) throw Error("cannot write " + path.string());
    }
  } catch (...) {
    for (const auto& name : written) std::filesystem::remove(dir / name, ec);
    written.clear();
    throw;
  }
}

}  // namespace

const char* version() { return QUANTOPT_VERSION; }

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : command_table()) out.push_back(name);
    return out;
  }();
  return names;
}

RunSummary run(const RunOptions& options) {
  const auto it = command_table().find(options.command);
  if (it == command_table().end()) throw Error("unknown command '" + options.command + "'");
  if (options.threads < 1) throw Error("--threads must be at least 1");

  RunConfig cfg = load_config(options.config);
  if (options.seed) cfg.seed = *options.seed;
  std::filesystem::path dir;
  if (options.out) {
    dir = *options.out;
  } else if (cfg.output.directory) {
    dir = *cfg.output.directory;
  } else {
    throw Error("missing required key 'output.directory' (or pass --out)");
  }

  Artifacts artifacts("quantopt " + std::string(version()) + " seed=" +
                      std::to_string(cfg.seed) + " config=" + cfg.hash);
  it->second(cfg, options.threads, artifacts);

  auto& items = artifacts.items();
  if (cfg.output.manifest) {
    json manifest;
    manifest["tool"] = "quantopt";
    manifest["version"] = version();
    manifest["command"] = options.command;
    manifest["seed"] = cfg.seed;
    manifest["config_hash"] = cfg.hash;
    manifest["config"] = cfg.raw;
    json files = json::array();
    for (const auto& a : items) {
      files.push_back({{"name", a.name}, {"fnv1a", [&] {
                         char hex[17];
                         std::snprintf(hex, sizeof hex, "%016llx",
                                       static_cast<unsigned long long>(fnv1a(a.content)));
                         return std::string(hex);
                       }()}});
    }
    manifest["outputs"] = files;
    items.push_back({"manifest.json", manifest.dump(2) + "\n"});
  }

  RunSummary summary;
  summary.directory = dir;
  write_all(dir, items, summary.files);
  return summary;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantile-based robust design optimization under uncertainty", "quantopt"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  RunOptions options;
  std::uint64_t seed = 0;
  std::string out_dir;
  for (const auto& name : commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", options.config, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override mc.seed");
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--threads", options.threads, "worker threads; never changes results")
        ->check(CLI::PositiveNumber);
    sub->callback([&options, name] { options.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--seed")) options.seed = seed;
  if (sub->count("--out")) options.out = out_dir;

  try {
    const RunSummary summary = run(options);
    out << "wrote " << summary.files.size() << " files to " << summary.directory.string()
        << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "quantopt " << options.command << ": error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace quantopt::cli
