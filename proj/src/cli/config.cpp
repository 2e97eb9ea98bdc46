#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>

#include "quantopt/csv.hpp"
#include "quantopt/error.hpp"

namespace quantopt::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(path + ": " + what);
}

// A JSON object whose keys are consumed one by one; finish() rejects the
// ones nobody asked for.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  const std::string& path() const { return path_; }
  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json* find(const std::string& key) {
    used_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = find(key);
    if (!v) throw Error("missing required key '" + key_path(key) + "'");
    return *v;
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!used_.contains(key)) {
        throw Error("unknown key '" + key_path(key) + "'");
      }
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

std::uint64_t as_u64(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  fail(path, "expected a non-negative integer");
}

std::size_t as_count(const json& v, const std::string& path,
                     std::size_t minimum = 0) {
  const std::uint64_t x = as_u64(v, path);
  if (x < minimum) {
    fail(path, "must be at least " + std::to_string(minimum));
  }
  return static_cast<std::size_t>(x);
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "expected true or false");
  return v.get<bool>();
}

std::vector<double> as_numbers(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

template <class T>
T choice(const json& v, const std::string& path,
         std::initializer_list<std::pair<const char*, T>> options) {
  const std::string s = as_string(v, path);
  std::string names;
  for (const auto& [name, value] : options) {
    if (s == name) return value;
    names += names.empty() ? "" : ", ";
    names += name;
  }
  fail(path, "unknown value \"" + s + "\" (expected one of " + names + ")");
}

Box parse_box(const json& v, const std::string& path) {
  Section s(v, path);
  auto lower = as_numbers(s.require("lower"), s.key_path("lower"));
  auto upper = as_numbers(s.require("upper"), s.key_path("upper"));
  s.finish();
  try {
    return Box(std::move(lower), std::move(upper));
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

ProblemConfig parse_problem(const json& v) {
  Section s(v, "problem");
  ProblemConfig p;
  p.name = as_string(s.require("id"), "problem.id");
  p.id = choice<ProblemId>(s.require("id"), "problem.id",
                           {{"bump", ProblemId::bump},
                            {"mv1", ProblemId::mv1},
                            {"mv4", ProblemId::mv4}});

  std::optional<std::size_t> n;
  if (const json* x = s.find("n")) n = as_count(*x, "problem.n", 1);

  if (p.id == ProblemId::bump) {
    p.bump = BumpParams::illustrative();
    if (const json* b = s.find("bump")) {
      Section bs(*b, "problem.bump");
      p.bump.amplitude = as_numbers(bs.require("amplitude"), "problem.bump.amplitude");
      p.bump.width = as_numbers(bs.require("width"), "problem.bump.width");
      const json& centers = bs.require("centers");
      if (!centers.is_array()) fail("problem.bump.centers", "expected an array");
      p.bump.centers.clear();
      for (std::size_t i = 0; i < centers.size(); ++i) {
        const std::string path = "problem.bump.centers[" + std::to_string(i) + "]";
        // A bare number is a one-dimensional center.
        p.bump.centers.push_back(centers[i].is_array()
                                     ? as_numbers(centers[i], path)
                                     : std::vector<double>{as_number(centers[i], path)});
      }
      bs.finish();
      try {
        p.bump.validate();
      } catch (const Error& e) {
        fail("problem.bump", e.what());
      }
    }
    p.n = p.bump.dim();
    if (n && *n != p.n) {
      fail("problem.n", "bump centers have dimension " + std::to_string(p.n));
    }
    if (p.n == 1) {
      p.design_box = bump_design_box();
      p.uncertainty_box = bump_uncertainty_box();
    }
  } else {
    p.n = n.value_or(1);
    const auto mv = mv_spec(p.id == ProblemId::mv1 ? MvId::mv1 : MvId::mv4, p.n);
    p.design_box = mv.design_box;
    p.uncertainty_box = mv.uncertainty_box;
  }

  if (const json* b = s.find("design_box")) p.design_box = parse_box(*b, "problem.design_box");
  if (const json* b = s.find("uncertainty_box")) {
    p.uncertainty_box = parse_box(*b, "problem.uncertainty_box");
  }
  if (p.design_box.dim() != p.n) {
    if (p.design_box.dim() == 0) throw Error("missing required key 'problem.design_box'");
    fail("problem.design_box", "dimension must be " + std::to_string(p.n));
  }
  if (p.uncertainty_box.dim() != p.n) {
    if (p.uncertainty_box.dim() == 0) {
      throw Error("missing required key 'problem.uncertainty_box'");
    }
    fail("problem.uncertainty_box", "dimension must be " + std::to_string(p.n));
  }

  if (const json* d = s.find("design")) {
    p.design = as_numbers(*d, "problem.design");
    if (p.design.size() != p.n) {
      fail("problem.design", "expected " + std::to_string(p.n) + " values");
    }
    if (!p.design_box.contains(p.design)) {
      fail("problem.design", "outside the design box");
    }
  }
  s.finish();
  return p;
}

McConfig parse_mc(const json& v, std::uint64_t& seed, std::optional<std::size_t>& count) {
  Section s(v, "mc");
  McConfig mc;
  if (const json* c = s.find("count")) {
    count = as_count(*c, "mc.count", 2);
    mc.count = *count;
  }
  if (const json* m = s.find("mode")) {
    mc.mode = choice<McMode>(*m, "mc.mode",
                             {{"frozen", McMode::frozen}, {"redrawn", McMode::redrawn}});
  }
  if (const json* x = s.find("seed")) seed = as_u64(*x, "mc.seed");
  s.finish();
  return mc;
}

QuantileConfig parse_quantiles(const json& v, std::optional<std::size_t> mc_count) {
  Section s(v, "quantiles");
  double eps = mc_count ? default_epsilon(*mc_count) : 1e-4;
  if (const json* e = s.find("epsilon")) {
    eps = as_number(*e, "quantiles.epsilon");
    if (!(eps > 0.0 && eps < 0.5)) fail("quantiles.epsilon", "must be in (0, 0.5)");
  }
  const json* formulation = s.find("formulation");
  const json* levels = s.find("levels");
  const json* many = s.find("many");
  const int given = (formulation != nullptr) + (levels != nullptr) + (many != nullptr);
  if (given != 1) {
    throw Error("quantiles: give exactly one of 'formulation', 'levels', 'many'");
  }
  QuantileConfig q;
  try {
    if (formulation) {
      q.levels = standard_levels(
          choice<Formulation>(*formulation, "quantiles.formulation",
                              {{"F1", Formulation::F1},
                               {"F2", Formulation::F2},
                               {"F3", Formulation::F3}}),
          eps);
    } else if (many) {
      q.levels = many_objective_levels(as_count(*many, "quantiles.many", 1), eps);
    } else {
      const auto values = as_numbers(*levels, "quantiles.levels");
      if (values.empty()) fail("quantiles.levels", "must not be empty");
      for (std::size_t i = 0; i < values.size(); ++i) {
        const std::string path = "quantiles.levels[" + std::to_string(i) + "]";
        if (values[i] < 0.0 || values[i] > 1.0) fail(path, "level out of range [0, 1]");
        if (i > 0 && values[i] <= values[i - 1]) fail(path, "levels must increase");
        q.levels.emplace_back(values[i]);
      }
    }
  } catch (const Error& e) {
    const std::string what = e.what();
    if (what.rfind("quantiles", 0) == 0) throw;
    fail("quantiles", what);
  }
  s.finish();
  return q;
}

GaConfig parse_ga(const json& v) {
  Section s(v, "ga");
  GaConfig ga;
  auto count = [&](const char* key, std::size_t& field) {
    if (const json* x = s.find(key)) field = as_count(*x, s.key_path(key));
  };
  auto number = [&](const char* key, double& field) {
    if (const json* x = s.find(key)) field = as_number(*x, s.key_path(key));
  };
  count("population_size", ga.population_size);
  count("generations", ga.generations);
  number("crossover_prob", ga.crossover_prob);
  number("mutation_rate", ga.mutation_rate);
  number("strength", ga.strength);
  number("elite_fraction", ga.elite_fraction);
  if (const json* x = s.find("bits_per_variable")) {
    ga.bits_per_variable = static_cast<int>(
        std::min<std::size_t>(as_count(*x, "ga.bits_per_variable"), 1000));
  }
  count("walk_length", ga.walk_length);
  count("archive_soft_cap", ga.archive_soft_cap);
  s.finish();
  try {
    ga.validate();
  } catch (const Error& e) {
    fail("ga", e.what());
  }
  return ga;
}

SampleSource parse_samples(const json& v, const std::filesystem::path& base_dir) {
  Section s(v, "bootstrap.samples");
  SampleSource src;
  src.kind = choice<SampleSource::Kind>(s.require("kind"), "bootstrap.samples.kind",
                                        {{"uniform", SampleSource::Kind::uniform},
                                         {"response", SampleSource::Kind::response},
                                         {"values", SampleSource::Kind::values},
                                         {"file", SampleSource::Kind::file}});
  switch (src.kind) {
    case SampleSource::Kind::uniform:
      src.count = as_count(s.require("count"), "bootstrap.samples.count", 2);
      if (const json* x = s.find("lower")) src.lower = as_number(*x, "bootstrap.samples.lower");
      if (const json* x = s.find("upper")) src.upper = as_number(*x, "bootstrap.samples.upper");
      if (!(src.lower <= src.upper)) fail("bootstrap.samples", "lower exceeds upper");
      break;
    case SampleSource::Kind::response:
      break;
    case SampleSource::Kind::values:
      src.values = as_numbers(s.require("values"), "bootstrap.samples.values");
      if (src.values.size() < 2) fail("bootstrap.samples.values", "need at least 2 values");
      break;
    case SampleSource::Kind::file: {
      const std::filesystem::path p = as_string(s.require("path"), "bootstrap.samples.path");
      src.path = p.is_absolute() ? p : base_dir / p;
      if (const json* x = s.find("column")) src.column = as_count(*x, "bootstrap.samples.column");
      break;
    }
  }
  s.finish();
  return src;
}

BootstrapConfig parse_bootstrap(const json& v, const std::filesystem::path& base_dir) {
  Section s(v, "bootstrap");
  BootstrapConfig b;
  if (const json* x = s.find("replicates")) {
    b.replicates = as_count(*x, "bootstrap.replicates", 100);
  }
  if (const json* x = s.find("level")) {
    b.level = as_number(*x, "bootstrap.level");
    if (!(b.level > 0.0 && b.level < 1.0)) fail("bootstrap.level", "must be in (0, 1)");
  }
  if (const json* x = s.find("m_grid")) {
    if (!x->is_array() || x->empty()) fail("bootstrap.m_grid", "expected a non-empty array");
    for (std::size_t i = 0; i < x->size(); ++i) {
      const std::string path = "bootstrap.m_grid[" + std::to_string(i) + "]";
      b.m_grid.push_back(as_count((*x)[i], path, 1));
      if (i > 0 && b.m_grid[i] < b.m_grid[i - 1]) fail(path, "grid must be ascending");
    }
  }
  b.samples = parse_samples(s.require("samples"), base_dir);
  if (const json* x = s.find("dump_replicates")) {
    b.dump_replicates = as_bool(*x, "bootstrap.dump_replicates");
  }
  s.finish();
  return b;
}

std::vector<double> parse_thresholds(const json& v) {
  if (v.is_array()) {
    auto t = as_numbers(v, "evidence.thresholds");
    if (t.empty()) fail("evidence.thresholds", "must not be empty");
    if (!std::is_sorted(t.begin(), t.end())) fail("evidence.thresholds", "must be ascending");
    return t;
  }
  Section s(v, "evidence.thresholds");
  const double from = as_number(s.require("from"), "evidence.thresholds.from");
  const double to = as_number(s.require("to"), "evidence.thresholds.to");
  const std::size_t count = as_count(s.require("count"), "evidence.thresholds.count", 2);
  s.finish();
  if (!(from < to)) fail("evidence.thresholds", "'from' must be below 'to'");
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i) {
    t[i] = from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  t.back() = to;
  return t;
}

EvidenceConfig parse_evidence(const json& v, std::optional<std::size_t> n) {
  Section s(v, "evidence");
  EvidenceConfig e;
  const json& bpa = s.require("bpa");
  if (!bpa.is_array() || bpa.empty()) {
    fail("evidence.bpa", "expected a non-empty array of dimensions");
  }
  for (std::size_t d = 0; d < bpa.size(); ++d) {
    const std::string dpath = "evidence.bpa[" + std::to_string(d) + "]";
    if (!bpa[d].is_array()) fail(dpath, "expected an array of {interval, mass}");
    BpaDimension dim;
    for (std::size_t k = 0; k < bpa[d].size(); ++k) {
      const std::string kpath = dpath + "[" + std::to_string(k) + "]";
      Section item(bpa[d][k], kpath);
      const auto interval = as_numbers(item.require("interval"), kpath + ".interval");
      if (interval.size() != 2) fail(kpath + ".interval", "expected [lo, hi]");
      const double mass = as_number(item.require("mass"), kpath + ".mass");
      item.finish();
      dim.push_back({{interval[0], interval[1]}, mass});
    }
    e.dimensions.push_back(std::move(dim));
  }
  // One dimension stands for all of them.
  if (n && e.dimensions.size() == 1 && *n > 1) {
    e.dimensions.assign(*n, e.dimensions.front());
  }
  if (n && e.dimensions.size() != *n) {
    fail("evidence.bpa", "expected 1 or " + std::to_string(*n) + " dimensions");
  }
  try {
    Bpa::validate(e.dimensions);
  } catch (const BpaError& err) {
    fail("evidence.bpa", err.what());
  }

  e.thresholds = parse_thresholds(s.require("thresholds"));
  if (const json* x = s.find("count")) e.count = as_count(*x, "evidence.count", 1);
  if (const json* x = s.find("exact")) {
    e.exact = choice<EvidenceConfig::Exact>(*x, "evidence.exact",
                                            {{"auto", EvidenceConfig::Exact::automatic},
                                             {"grid", EvidenceConfig::Exact::grid},
                                             {"none", EvidenceConfig::Exact::none}});
  }
  if (const json* x = s.find("grid_points")) {
    e.grid_points = as_count(*x, "evidence.grid_points", 2);
  }
  s.finish();
  return e;
}

BenchConfig parse_bench(const json& v) {
  Section s(v, "bench");
  BenchConfig b;
  if (const json* x = s.find("points")) b.points = as_count(*x, "bench.points", 2);
  s.finish();
  return b;
}

OutputConfig parse_output(const json& v, const std::filesystem::path& base_dir) {
  Section s(v, "output");
  OutputConfig o;
  if (const json* x = s.find("directory")) {
    const std::filesystem::path p = as_string(*x, "output.directory");
    o.directory = p.is_absolute() ? p : base_dir / p;
  }
  if (const json* x = s.find("formats")) {
    if (!x->is_array()) fail("output.formats", "expected an array");
    bool csv = false;
    o.manifest = false;
    for (std::size_t i = 0; i < x->size(); ++i) {
      const std::string path = "output.formats[" + std::to_string(i) + "]";
      const std::string f = as_string((*x)[i], path);
      if (f == "csv") {
        csv = true;
      } else if (f == "json") {
        o.manifest = true;
      } else {
        fail(path, "unknown format \"" + f + "\" (expected csv or json)");
      }
    }
    if (!csv) fail("output.formats", "csv output is always produced; list \"csv\"");
  }
  s.finish();
  return o;
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text,
                                                    std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

Response ProblemConfig::response() const {
  switch (id) {
    case ProblemId::bump:
      return [params = bump](std::span<const double> z, std::span<const double> u) {
        return eval_bump(params, z, u);
      };
    case ProblemId::mv1:
      return [](std::span<const double> z, std::span<const double> u) {
        return eval_mv1(z, u);
      };
    case ProblemId::mv4:
      return [](std::span<const double> z, std::span<const double> u) {
        return eval_mv4(z, u);
      };
  }
  throw Error("unknown problem");
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  Section top(doc, "");
  RunConfig cfg;
  cfg.raw = doc;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a(doc.dump())));
  cfg.hash = hex;

  std::optional<std::size_t> mc_count;
  if (const json* v = top.find("mc")) cfg.mc = parse_mc(*v, cfg.seed, mc_count);
  if (const json* v = top.find("problem")) cfg.problem = parse_problem(*v);
  if (const json* v = top.find("quantiles")) cfg.quantiles = parse_quantiles(*v, mc_count);
  if (const json* v = top.find("ga")) cfg.ga = parse_ga(*v);
  if (const json* v = top.find("bootstrap")) cfg.bootstrap = parse_bootstrap(*v, base_dir);
  if (const json* v = top.find("evidence")) {
    cfg.evidence = parse_evidence(
        *v, cfg.problem ? std::optional<std::size_t>(cfg.problem->n) : std::nullopt);
  }
  if (const json* v = top.find("bench")) cfg.bench = parse_bench(*v);
  if (const json* v = top.find("output")) cfg.output = parse_output(*v, base_dir);
  top.finish();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte);
    std::string what = e.what();
    // Drop the library's "[json.exception.parse_error.101] " prefix.
    if (const auto pos = what.find("] "); pos != std::string::npos) what.erase(0, pos + 2);
    throw Error(path.string() + ":" + std::to_string(line) + ":" +
                std::to_string(column) + ": " + what);
  }
  try {
    return parse_config(doc, path.parent_path());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace quantopt::cli
