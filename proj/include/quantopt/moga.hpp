#ifndef QUANTOPT_MOGA_HPP_
#define QUANTOPT_MOGA_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "quantopt/pareto.hpp"
#include "quantopt/robust_problem.hpp"
#include "quantopt/sampling.hpp"

namespace quantopt {

// Concatenated fixed-point encoding of a genome, most significant bit first
// within each variable.
using BitString = std::vector<bool>;

// Maps each variable onto an unsigned integer in [0, 2^bits - 1] spanning
// [lower, upper] (lower -> all zeros, upper -> all ones). Values outside the
// box are clamped. bits_per_variable must be in [1, 64].
BitString encode(std::span<const double> genome, const Box& box,
                 int bits_per_variable);
std::vector<double> decode(const BitString& bits, const Box& box,
                           int bits_per_variable);

// Swaps the suffixes of the two parents from position `cut` on. Throws
// Error on a length mismatch or a cut outside [1, len - 1].
std::pair<BitString, BitString> one_point_crossover(const BitString& parent_a,
                                                    const BitString& parent_b,
                                                    std::size_t cut);

// strength * (r - 0.5) * width: the additive step of a word mutation.
inline double word_mutation_delta(double strength, double r, double width) {
  return strength * (r - 0.5) * width;
}

// With probability mutation_rate, each variable moves by
// strength * (r - 0.5) * (upper - lower), r ~ U[0, 1); the result is clamped
// to the box.
std::vector<double> word_mutation(std::span<const double> genome,
                                  const Box& box, double mutation_rate,
                                  double strength, Rng& rng);

// Walk of `walk_length` uniform picks from the population. The current
// winner is replaced when a pick dominates it; when neither dominates, a
// fair coin decides. Throws Error on an empty population.
const Individual& local_random_walk_selection(
    std::span<const Individual> population, std::size_t walk_length,
    Rng& rng);

// Adds the population to the archive, then overwrites
// floor(elite_fraction * N) distinct, uniformly chosen slots with uniform
// draws (with replacement) from the archive.
void elitist_replacement(std::vector<Individual>& population,
                         ParetoArchive& archive, double elite_fraction,
                         Rng& rng);

struct GaConfig {
  std::size_t population_size = 100;
  std::size_t generations = 50;
  double crossover_prob = 1.0;
  double mutation_rate = 0.5;
  double strength = 0.06;
  double elite_fraction = 0.2;
  int bits_per_variable = 32;
  std::size_t walk_length = 3;
  Seed seed;
  std::size_t archive_soft_cap = ParetoArchive::kDefaultSoftCap;

  // Throws Error describing the first violated constraint.
  void validate() const;
};

struct MogaResult {
  ParetoArchive archive;
  // Archive snapshot after the initial population and after every
  // generation: generations + 1 entries.
  std::vector<std::vector<Individual>> history;
};

// Multi-objective GA: Sobol'-initialized population, local random walk
// selection, one-point bit crossover, word mutation and 20% elitist
// reinjection from the Pareto archive. Results depend only on (problem,
// config); `threads` parallelizes objective evaluation.
MogaResult run_moga(const RobustProblem& problem, const GaConfig& config,
                    std::size_t threads = 1);

}  // namespace quantopt

#endif  // QUANTOPT_MOGA_HPP_
