#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "doctest.h"
#include "quantopt/bench.hpp"
#include "quantopt/error.hpp"
#include "quantopt/moga.hpp"
#include "quantopt/robust_problem.hpp"

using quantopt::BitString;
using quantopt::Box;
using quantopt::GaConfig;
using quantopt::Individual;
using quantopt::ParetoArchive;
using quantopt::Rng;
using quantopt::Seed;

namespace {

BitString bits(const char* text) {
  BitString out;
  for (const char* c = text; *c; ++c) out.push_back(*c == '1');
  return out;
}

quantopt::RobustProblem quadratic_problem() {
  quantopt::RobustProblemSpec spec;
  spec.design_box = Box({-2.0}, {3.0});
  spec.uncertainty_box = Box({0.0}, {1.0});
  spec.response = [](std::span<const double> z, std::span<const double>) {
    return z[0] * z[0];
  };
  spec.levels = {quantopt::QuantileLevel(0.5)};
  spec.mc_count = 4;
  return quantopt::RobustProblem(std::move(spec));
}

quantopt::RobustProblem mv4_problem(std::size_t n, std::size_t mc) {
  const auto mv = quantopt::mv_spec(quantopt::MvId::mv4, n);
  quantopt::RobustProblemSpec spec;
  spec.design_box = mv.design_box;
  spec.uncertainty_box = mv.uncertainty_box;
  spec.response = [](std::span<const double> d, std::span<const double> u) {
    return quantopt::eval_mv4(d, u);
  };
  spec.levels = quantopt::standard_levels(quantopt::Formulation::F1, 1e-3);
  spec.mc_count = mc;
  spec.seed = Seed{17};
  return quantopt::RobustProblem(std::move(spec));
}

// True when every point of `b` is weakly dominated by some point of `a`.
bool covers(const std::vector<Individual>& a, const std::vector<Individual>& b) {
  return std::all_of(b.begin(), b.end(), [&](const Individual& y) {
    return std::any_of(a.begin(), a.end(), [&](const Individual& x) {
      return x.objectives == y.objectives ||
             quantopt::dominates(x.objectives, y.objectives);
    });
  });
}

}  // namespace

TEST_CASE("encode maps bounds to all-zero and all-one strings") {
  const Box box({0.0, -1.0}, {5.0, 1.0});
  CHECK(quantopt::encode(std::vector<double>{0.0, -1.0}, box, 8) ==
        bits("0000000000000000"));
  CHECK(quantopt::encode(std::vector<double>{5.0, 1.0}, box, 8) ==
        bits("1111111111111111"));
  CHECK(quantopt::decode(bits("1111111100000000"), box, 8) ==
        std::vector<double>{5.0, -1.0});
}

TEST_CASE("property: decode(encode(x)) is within half a quantization step") {
  std::mt19937_64 gen(1);
  const Box box({-3.0, 0.0, 10.0}, {5.0, 2 * 3.141592653589793, 10.5});
  for (int bits_per : {8, 16, 32}) {
    const double levels = std::ldexp(1.0, bits_per) - 1.0;
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> x(3);
      for (std::size_t i = 0; i < 3; ++i) {
        x[i] = std::uniform_real_distribution<double>(box.lower()[i],
                                                      box.upper()[i])(gen);
      }
      const auto y = quantopt::decode(quantopt::encode(x, box, bits_per), box, bits_per);
      CHECK(box.contains(y));
      for (std::size_t i = 0; i < 3; ++i) {
        const double err = std::abs(y[i] - x[i]);
        CHECK(err <= box.width(i) / (2.0 * levels) * (1 + 1e-9));
      }
    }
  }
}

TEST_CASE("one point crossover") {
  const auto [a, b] = quantopt::one_point_crossover(bits("0000"), bits("1111"), 2);
  CHECK(a == bits("0011"));
  CHECK(b == bits("1100"));

  const auto [c, d] = quantopt::one_point_crossover(bits("1010"), bits("1010"), 3);
  CHECK(c == bits("1010"));
  CHECK(d == bits("1010"));

  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 100; ++trial) {
    BitString p(64), q(64);
    for (std::size_t i = 0; i < 64; ++i) {
      p[i] = gen() & 1;
      q[i] = gen() & 1;
    }
    const std::size_t cut = 1 + gen() % 63;
    const auto [x, y] = quantopt::one_point_crossover(p, q, cut);
    for (std::size_t i = 0; i < 64; ++i) {
      // Each position keeps the parents' multiset of bits.
      CHECK(static_cast<int>(x[i]) + y[i] == static_cast<int>(p[i]) + q[i]);
    }
  }
  CHECK_THROWS_AS(quantopt::one_point_crossover(bits("01"), bits("011"), 1),
                  quantopt::Error);
  CHECK_THROWS_AS(quantopt::one_point_crossover(bits("0101"), bits("0110"), 0),
                  quantopt::Error);
  CHECK_THROWS_AS(quantopt::one_point_crossover(bits("0101"), bits("0110"), 4),
                  quantopt::Error);
}

TEST_CASE("word mutation") {
  CHECK(quantopt::word_mutation_delta(0.06, 1.0, 5.0) == doctest::Approx(0.15));
  CHECK(quantopt::word_mutation_delta(0.06, 0.5, 5.0) == 0.0);

  const Box box({0.0, 0.0}, {5.0, 1.0});
  Rng rng(Seed{9}, {});
  const std::vector<double> g{2.5, 0.5};
  CHECK(quantopt::word_mutation(g, box, 0.0, 0.06, rng) == g);

  int changed = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto m = quantopt::word_mutation(g, box, 0.5, 0.06, rng);
    CHECK(std::abs(m[0] - g[0]) <= 0.15);
    CHECK(std::abs(m[1] - g[1]) <= 0.03);
    changed += (m[0] != g[0]);
  }
  CHECK(changed > 900);
  CHECK(changed < 1100);

  // Near the bound the result is clamped.
  const std::vector<double> edge{4.99, 0.999};
  for (int trial = 0; trial < 200; ++trial) {
    CHECK(box.contains(quantopt::word_mutation(edge, box, 1.0, 0.06, rng)));
  }
}

TEST_CASE("local random walk selection") {
  const std::vector<Individual> one{{{1.0}, {1.0, 1.0}}};
  Rng rng(Seed{1}, {});
  CHECK(&quantopt::local_random_walk_selection(one, 5, rng) == &one[0]);
  CHECK_THROWS_AS(quantopt::local_random_walk_selection({}, 3, rng), quantopt::Error);

  // walk_length 1 is a uniform draw.
  const std::vector<Individual> four{{{0.0}, {0, 3}}, {{1.0}, {1, 2}},
                                     {{2.0}, {2, 1}}, {{3.0}, {3, 0}}};
  std::vector<int> counts(4, 0);
  for (int t = 0; t < 8000; ++t) {
    counts[static_cast<int>(
        quantopt::local_random_walk_selection(four, 1, rng).genome[0])]++;
  }
  for (int c : counts) CHECK(std::abs(c - 2000) < 200);
}

TEST_CASE("walk selection favors a dominating individual as predicted") {
  // A dominates B and C; B and C are mutually non-dominated.
  const std::vector<Individual> pop{{{0.0}, {0, 0}}, {{1.0}, {1, 2}}, {{2.0}, {2, 1}}};
  constexpr std::size_t walk = 3;

  // Oracle: enumerate all pick sequences and coin flips, each equally likely.
  double p_exact = 0.0;
  const int sequences = 27;
  const int coin_patterns = 4;
  for (int picks = 0; picks < sequences; ++picks) {
    for (int coins = 0; coins < coin_patterns; ++coins) {
      int p = picks;
      int winner = p % 3;
      p /= 3;
      for (int step = 1; step < static_cast<int>(walk); ++step) {
        const int pick = p % 3;
        p /= 3;
        const bool coin = (coins >> (step - 1)) & 1;
        const auto& w = pop[winner].objectives;
        const auto& c = pop[pick].objectives;
        if (quantopt::dominates(c, w)) {
          winner = pick;
        } else if (!quantopt::dominates(w, c) && coin) {
          winner = pick;
        }
      }
      if (winner == 0) p_exact += 1.0 / (sequences * coin_patterns);
    }
  }
  CHECK(p_exact == doctest::Approx(19.0 / 27.0));

  Rng rng(Seed{77}, {});
  constexpr int trials = 10000;
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    hits += quantopt::local_random_walk_selection(pop, walk, rng).genome[0] == 0.0;
  }
  const double freq = static_cast<double>(hits) / trials;
  const double se = std::sqrt(p_exact * (1 - p_exact) / trials);
  CHECK(std::abs(freq - p_exact) < 4 * se);
  CHECK(freq > 1.0 / 3.0);
}

TEST_CASE("elitist replacement") {
  Rng rng(Seed{5}, {});
  std::vector<Individual> pop;
  for (int i = 0; i < 10; ++i) {
    pop.push_back({{static_cast<double>(i)}, {static_cast<double>(i), 10.0 - i}});
  }

  SUBCASE("zero fraction leaves the population but updates the archive") {
    ParetoArchive archive;
    auto copy = pop;
    quantopt::elitist_replacement(copy, archive, 0.0, rng);
    CHECK(copy == pop);
    CHECK(archive.size() == 10);
  }

  SUBCASE("a single archive member fills exactly floor(0.2 N) slots") {
    ParetoArchive archive;
    archive.insert({{-1.0}, {-1.0, -1.0}});
    auto copy = pop;
    quantopt::elitist_replacement(copy, archive, 0.2, rng);
    CHECK(std::count_if(copy.begin(), copy.end(), [](const Individual& x) {
            return x.genome[0] == -1.0;
          }) == 2);
  }

  SUBCASE("replaced slots hold archive members") {
    ParetoArchive archive;
    std::vector<Individual> dominated;
    for (int i = 0; i < 10; ++i) {
      dominated.push_back({{100.0 + i}, {20.0 + i, 20.0}});
    }
    archive.insert_all(pop);
    quantopt::elitist_replacement(dominated, archive, 0.5, rng);
    int from_archive = 0;
    for (const auto& x : dominated) {
      const bool member = std::ranges::find(archive.members(), x) !=
                          archive.members().end();
      from_archive += member;
      CHECK((member || x.genome[0] >= 100.0));
    }
    CHECK(from_archive == 5);
  }
}

TEST_CASE("config validation") {
  GaConfig c;
  CHECK_NOTHROW(c.validate());
  c.population_size = 5;
  CHECK_THROWS_AS(c.validate(), quantopt::Error);
  c = GaConfig{};
  c.mutation_rate = 1.5;
  CHECK_THROWS_AS(c.validate(), quantopt::Error);
  c = GaConfig{};
  c.strength = 0.0;
  CHECK_THROWS_AS(c.validate(), quantopt::Error);
  c = GaConfig{};
  c.bits_per_variable = 4;
  CHECK_THROWS_AS(c.validate(), quantopt::Error);
}

TEST_CASE("zero generations gives the front of the initial Sobol population") {
  const auto problem = mv4_problem(1, 200);
  GaConfig config;
  config.population_size = 16;
  config.generations = 0;
  const auto result = quantopt::run_moga(problem, config);
  REQUIRE(result.history.size() == 1);

  const auto initial = quantopt::scale_to_box(quantopt::sobol_sequence(1, 16),
                                              problem.design_box());
  std::vector<std::vector<double>> objectives;
  for (std::size_t i = 0; i < 16; ++i) {
    objectives.push_back(problem.evaluate(initial.row(i)));
  }
  const auto front = quantopt::nondominated_filter(objectives);
  CHECK(result.archive.size() == front.size());
  for (std::size_t i : front) {
    CHECK(std::ranges::any_of(result.archive.members(), [&](const Individual& m) {
      return m.objectives == objectives[i];
    }));
  }
}

TEST_CASE("single-objective convex problem converges to the minimum") {
  GaConfig config;
  config.population_size = 100;
  config.generations = 50;
  config.seed = Seed{3};
  const auto result = quantopt::run_moga(quadratic_problem(), config);
  REQUIRE(result.archive.size() == 1);
  CHECK(std::abs(result.archive.members()[0].genome[0]) < 0.05);
}

TEST_CASE("run invariants: history, bounds, monotone archive, determinism") {
  const auto problem = mv4_problem(2, 300);
  GaConfig config;
  config.population_size = 40;
  config.generations = 12;
  config.seed = Seed{11};
  const auto a = quantopt::run_moga(problem, config, 1);
  CHECK(a.history.size() == config.generations + 1);
  for (std::size_t g = 0; g < a.history.size(); ++g) {
    for (const auto& m : a.history[g]) CHECK(problem.design_box().contains(m.genome));
    if (g > 0) CHECK(covers(a.history[g], a.history[g - 1]));
    for (const auto& x : a.history[g]) {
      for (const auto& y : a.history[g]) {
        CHECK_FALSE(quantopt::dominates(x.objectives, y.objectives));
      }
    }
  }
  const auto b = quantopt::run_moga(problem, config, 8);
  CHECK(a.history == b.history);

  config.seed = Seed{12};
  const auto c = quantopt::run_moga(problem, config, 1);
  CHECK_FALSE(a.history == c.history);
}

TEST_CASE("redrawn mode stays deterministic across thread counts") {
  const auto mv = quantopt::mv_spec(quantopt::MvId::mv4, 1);
  quantopt::RobustProblemSpec spec;
  spec.design_box = mv.design_box;
  spec.uncertainty_box = mv.uncertainty_box;
  spec.response = [](std::span<const double> d, std::span<const double> u) {
    return quantopt::eval_mv4(d, u);
  };
  spec.levels = quantopt::standard_levels(quantopt::Formulation::F1, 1e-2);
  spec.mc_count = 100;
  spec.mc_mode = quantopt::McMode::redrawn;
  const quantopt::RobustProblem problem(std::move(spec));
  GaConfig config;
  config.population_size = 20;
  config.generations = 5;
  CHECK(quantopt::run_moga(problem, config, 1).history ==
        quantopt::run_moga(problem, config, 4).history);
}

TEST_CASE("evaluation errors carry generation and individual context") {
  quantopt::RobustProblemSpec spec;
  spec.design_box = Box({0.0}, {1.0});
  spec.uncertainty_box = Box({0.0}, {1.0});
  spec.response = [](std::span<const double> z, std::span<const double>) {
    return z[0] > 0.7 ? std::nan("") : z[0];
  };
  spec.levels = {quantopt::QuantileLevel(0.5)};
  spec.mc_count = 2;
  const quantopt::RobustProblem problem(std::move(spec));
  GaConfig config;
  config.population_size = 4;
  config.generations = 1;
  CHECK_THROWS_WITH_AS(quantopt::run_moga(problem, config),
                       doctest::Contains("generation 0, individual 1"),
                       quantopt::Error);
}

TEST_CASE("composed mv4 front covers most of a direct GA front at n = 2") {
  const auto p1 = mv4_problem(1, 500);
  GaConfig config;
  config.population_size = 200;
  config.generations = 20;
  config.seed = Seed{21};
  const auto front1 = quantopt::run_moga(p1, config, 4).archive.members();

  std::vector<quantopt::FrontPoint> front_1d;
  for (const auto& m : front1) front_1d.push_back({m.genome, m.objectives});
  // Thin to at most 300 designs to bound the candidate count.
  std::sort(front_1d.begin(), front_1d.end(),
            [](const auto& a, const auto& b) { return a.objectives < b.objectives; });
  if (front_1d.size() > 300) {
    std::vector<quantopt::FrontPoint> thinned;
    for (std::size_t i = 0; i < 300; ++i) {
      thinned.push_back(front_1d[i * (front_1d.size() - 1) / 299]);
    }
    front_1d = std::move(thinned);
  }

  const auto p2 = mv4_problem(2, 500);
  const auto composed = quantopt::compose_front_from_1d(
      front_1d, 2, [&](std::span<const double> d) { return p2.evaluate(d); },
      quantopt::kDefaultComposeCap, 4);

  config.population_size = 100;
  config.generations = 20;
  const auto direct = quantopt::run_moga(p2, config, 4).archive.members();

  // Count the GA points that the composed front fails to weakly dominate,
  // allowing a small slack for the finite one-dimensional front. Full
  // coverage does not hold: averaging two coordinates shrinks the upper
  // tail, so pairs that are dominated at n = 1 (e.g. d near (4.67, 4.71))
  // reach lower q^(1-eps) at n = 2 than any composed pair.
  std::size_t uncovered = 0;
  for (const auto& y : direct) {
    const bool hit = std::ranges::any_of(composed, [&](const auto& x) {
      return x.objectives[0] <= y.objectives[0] + 0.02 &&
             x.objectives[1] <= y.objectives[1] + 0.02;
    });
    uncovered += !hit;
  }
  CHECK(uncovered * 10 <= direct.size());

  auto min_obj = [](const auto& set, std::size_t k) {
    double best = set.front().objectives[k];
    for (const auto& x : set) best = std::min(best, x.objectives[k]);
    return best;
  };
  CHECK(std::abs(min_obj(composed, 0) - min_obj(direct, 0)) < 0.02);
}
