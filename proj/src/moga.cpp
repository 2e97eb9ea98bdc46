#include "quantopt/moga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "quantopt/error.hpp"
#include "quantopt/parallel.hpp"

namespace quantopt {

namespace {

// Stream tags; every random decision draws from (seed, tag, generation, ...)
// so results never depend on evaluation order.
enum StreamTag : std::uint64_t {
  kSelectStream = 1,
  kCrossoverStream = 2,
  kMutationStream = 3,
  kEliteStream = 4,
};

std::uint64_t max_level(int bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

void check_bits(int bits) {
  if (bits < 1 || bits > 64) {
    throw Error("bits per variable must be in [1, 64], got " +
                std::to_string(bits));
  }
}

}  // namespace

BitString encode(std::span<const double> genome, const Box& box,
                 int bits_per_variable) {
  check_bits(bits_per_variable);
  if (genome.size() != box.dim()) {
    throw Error("genome dimension does not match the design box");
  }
  const auto levels = static_cast<long double>(max_level(bits_per_variable));
  BitString bits;
  bits.reserve(genome.size() * bits_per_variable);
  for (std::size_t i = 0; i < genome.size(); ++i) {
    const double width = box.width(i);
    long double t = 0.0L;
    if (width > 0.0) {
      t = std::clamp<long double>((genome[i] - box.lower()[i]) / width, 0.0L,
                                  1.0L);
    }
    const auto code = static_cast<std::uint64_t>(std::nearbyint(t * levels));
    for (int b = bits_per_variable - 1; b >= 0; --b) {
      bits.push_back(((code >> b) & 1u) != 0);
    }
  }
  return bits;
}

std::vector<double> decode(const BitString& bits, const Box& box,
                           int bits_per_variable) {
  check_bits(bits_per_variable);
  const auto per = static_cast<std::size_t>(bits_per_variable);
  if (bits.size() != box.dim() * per) {
    throw Error("bit string length does not match the design box");
  }
  const auto levels = static_cast<long double>(max_level(bits_per_variable));
  std::vector<double> genome(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    std::uint64_t code = 0;
    for (std::size_t b = 0; b < per; ++b) {
      code = (code << 1) | (bits[i * per + b] ? 1u : 0u);
    }
    const long double t = static_cast<long double>(code) / levels;
    const double x = static_cast<double>(box.lower()[i] + t * box.width(i));
    genome[i] = std::clamp(x, box.lower()[i], box.upper()[i]);
  }
  return genome;
}

std::pair<BitString, BitString> one_point_crossover(const BitString& parent_a,
                                                    const BitString& parent_b,
                                                    std::size_t cut) {
  if (parent_a.size() != parent_b.size()) {
    throw Error("crossover parents differ in length");
  }
  if (cut < 1 || cut >= parent_a.size()) {
    throw Error("crossover cut " + std::to_string(cut) + " outside [1, " +
                std::to_string(parent_a.size()) + " - 1]");
  }
  BitString child_a(parent_a.begin(), parent_a.begin() + cut);
  BitString child_b(parent_b.begin(), parent_b.begin() + cut);
  child_a.insert(child_a.end(), parent_b.begin() + cut, parent_b.end());
  child_b.insert(child_b.end(), parent_a.begin() + cut, parent_a.end());
  return {std::move(child_a), std::move(child_b)};
}

std::vector<double> word_mutation(std::span<const double> genome,
                                  const Box& box, double mutation_rate,
                                  double strength, Rng& rng) {
  std::vector<double> out(genome.begin(), genome.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (rng.uniform() >= mutation_rate) continue;
    const double r = rng.uniform();
    out[i] += word_mutation_delta(strength, r, box.width(i));
    out[i] = std::clamp(out[i], box.lower()[i], box.upper()[i]);
  }
  return out;
}

const Individual& local_random_walk_selection(
    std::span<const Individual> population, std::size_t walk_length,
    Rng& rng) {
  if (population.empty()) throw Error("cannot select from an empty population");
  const Individual* winner = &population[rng.below(population.size())];
  for (std::size_t step = 1; step < walk_length; ++step) {
    const Individual& pick = population[rng.below(population.size())];
    if (dominates(pick.objectives, winner->objectives)) {
      winner = &pick;
    } else if (!dominates(winner->objectives, pick.objectives) && rng.coin()) {
      winner = &pick;
    }
  }
  return *winner;
}

void elitist_replacement(std::vector<Individual>& population,
                         ParetoArchive& archive, double elite_fraction,
                         Rng& rng) {
  archive.insert_all(population);
  if (archive.empty()) throw Error("elitist replacement needs a non-empty archive");
  const auto replaced = static_cast<std::size_t>(
      std::floor(elite_fraction * static_cast<double>(population.size())));
  // Partial Fisher-Yates picks distinct slots.
  std::vector<std::size_t> slots(population.size());
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  for (std::size_t i = 0; i < replaced && i < slots.size(); ++i) {
    const std::size_t j = i + rng.below(slots.size() - i);
    std::swap(slots[i], slots[j]);
    const auto& members = archive.members();
    population[slots[i]] = members[rng.below(members.size())];
  }
}

void GaConfig::validate() const {
  if (population_size < 4 || population_size % 2 != 0) {
    throw Error("population size must be even and at least 4");
  }
  auto probability = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(std::string(name) + " must be in [0, 1]");
    }
  };
  probability(crossover_prob, "crossover probability");
  probability(mutation_rate, "mutation rate");
  probability(elite_fraction, "elite fraction");
  if (!(strength > 0.0)) throw Error("mutation strength must be positive");
  if (bits_per_variable < 8 || bits_per_variable > 64) {
    throw Error("bits per variable must be in [8, 64]");
  }
  if (walk_length < 1) throw Error("walk length must be at least 1");
  if (archive_soft_cap < 1) throw Error("archive cap must be positive");
}

namespace {

void evaluate_all(const RobustProblem& problem,
                  std::vector<Individual>& population, std::size_t generation,
                  std::size_t threads) {
  const std::size_t n = population.size();
  parallel_for(n, threads, [&](std::size_t i) {
    Individual& ind = population[i];
    if (ind.evaluated()) return;
    try {
      ind.objectives = problem.evaluate(ind.genome, generation * n + i);
    } catch (const Error& e) {
      throw Error("generation " + std::to_string(generation) +
                  ", individual " + std::to_string(i) + ": " + e.what());
    }
  });
}

}  // namespace

MogaResult run_moga(const RobustProblem& problem, const GaConfig& config,
                    std::size_t threads) {
  config.validate();
  const Box& box = problem.design_box();
  const std::size_t n = config.population_size;
  const Seed seed = config.seed;

  const Matrix initial =
      scale_to_box(sobol_sequence(static_cast<int>(box.dim()), n), box);
  std::vector<Individual> population(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = initial.row(i);
    population[i].genome.assign(row.begin(), row.end());
  }

  MogaResult result{ParetoArchive(config.archive_soft_cap), {}};
  result.history.reserve(config.generations + 1);

  evaluate_all(problem, population, 0, threads);
  {
    Rng rng(seed, {kEliteStream, 0});
    elitist_replacement(population, result.archive, config.elite_fraction, rng);
  }
  result.history.push_back(result.archive.members());

  const std::size_t bit_length = box.dim() * config.bits_per_variable;
  for (std::size_t gen = 1; gen <= config.generations; ++gen) {
    std::vector<Individual> children(n);
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng(seed, {kSelectStream, gen, i});
      children[i].genome =
          local_random_walk_selection(population, config.walk_length, rng)
              .genome;
    }

    for (std::size_t p = 0; p + 1 < n; p += 2) {
      Rng rng(seed, {kCrossoverStream, gen, p});
      if (bit_length < 2 || rng.uniform() >= config.crossover_prob) continue;
      const std::size_t cut = 1 + rng.below(bit_length - 1);
      auto [a, b] = one_point_crossover(
          encode(children[p].genome, box, config.bits_per_variable),
          encode(children[p + 1].genome, box, config.bits_per_variable), cut);
      children[p].genome = decode(a, box, config.bits_per_variable);
      children[p + 1].genome = decode(b, box, config.bits_per_variable);
    }

    for (std::size_t i = 0; i < n; ++i) {
      Rng rng(seed, {kMutationStream, gen, i});
      children[i].genome = word_mutation(children[i].genome, box,
                                         config.mutation_rate,
                                         config.strength, rng);
    }

    evaluate_all(problem, children, gen, threads);
    Rng rng(seed, {kEliteStream, gen});
    elitist_replacement(children, result.archive, config.elite_fraction, rng);
    population = std::move(children);
    result.history.push_back(result.archive.members());
  }
  return result;
}

}  // namespace quantopt
