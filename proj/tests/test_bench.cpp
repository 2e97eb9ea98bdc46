#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "quantopt/bench.hpp"
#include "quantopt/error.hpp"
#include "quantopt/pareto.hpp"

using doctest::Approx;
using quantopt::FrontPoint;

TEST_CASE("bump function values") {
  const auto p = quantopt::BumpParams::illustrative();
  // Direct high-precision evaluation of the four-bump sum.
  CHECK(quantopt::eval_bump(p, std::vector<double>{1.0}) ==
        Approx(0.0473003877190678).epsilon(1e-12));
  CHECK(quantopt::eval_bump(p, std::vector<double>{2.5}) ==
        Approx(0.5).epsilon(1e-12));
  CHECK(quantopt::eval_bump(p, std::vector<double>{4.1}) ==
        Approx(0.307580905547420).epsilon(1e-12));

  auto flat = p;
  std::fill(flat.amplitude.begin(), flat.amplitude.end(), 0.0);
  for (double x : {-3.0, 0.0, 1.7, 9.0}) {
    CHECK(quantopt::eval_bump(flat, std::vector<double>{x}) == 1.0);
  }
  // z + u form.
  CHECK(quantopt::eval_bump(p, std::vector<double>{0.9},
                            std::vector<double>{0.1}) ==
        quantopt::eval_bump(p, std::vector<double>{1.0}));
}

TEST_CASE("bump parameter validation") {
  auto p = quantopt::BumpParams::illustrative();
  CHECK_NOTHROW(p.validate());
  p.width[1] = 0.0;
  CHECK_THROWS_AS(p.validate(), quantopt::Error);
  p = quantopt::BumpParams::illustrative();
  p.amplitude.pop_back();
  CHECK_THROWS_AS(p.validate(), quantopt::Error);
}

TEST_CASE("mv4 values") {
  using quantopt::eval_mv4;
  CHECK(eval_mv4(std::vector<double>{3.1416}, std::vector<double>{0.0}) ==
        Approx(-6.283185).epsilon(1e-6));
  CHECK(eval_mv4(std::vector<double>{4.6638}, std::vector<double>{0.0}) ==
        Approx(-0.305173).epsilon(1e-5));
  CHECK(eval_mv4(std::vector<double>{0.0}, std::vector<double>{0.0}) ==
        Approx(2 * std::numbers::pi));
  CHECK(eval_mv4(std::vector<double>{3.1416, 3.1416},
                 std::vector<double>{0.0, 0.0}) ==
        Approx(-6.283185).epsilon(1e-6));
  CHECK_THROWS_AS(eval_mv4(std::vector<double>{1.0}, std::vector<double>{0.0, 1.0}),
                  quantopt::Error);
}

TEST_CASE("property: mv4 is invariant under coordinate permutation") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> dd(0, 2 * std::numbers::pi), du(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> d(4), u(4);
    for (int i = 0; i < 4; ++i) {
      d[i] = dd(gen);
      u[i] = du(gen);
    }
    std::vector<int> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<double> pd(4), pu(4);
    for (int i = 0; i < 4; ++i) {
      pd[i] = d[perm[i]];
      pu[i] = u[perm[i]];
    }
    CHECK(quantopt::eval_mv4(d, u) == Approx(quantopt::eval_mv4(pd, pu)).epsilon(1e-12));
  }
}

TEST_CASE("mv1 values and sign") {
  using quantopt::eval_mv1;
  CHECK(eval_mv1(std::vector<double>{1}, std::vector<double>{3}) == 9);
  CHECK(eval_mv1(std::vector<double>{1, 1}, std::vector<double>{-5, 3}) == 34);
  CHECK(eval_mv1(std::vector<double>{2}, std::vector<double>{-4}) == 32);
  CHECK(eval_mv1(std::vector<double>{2, 3}, std::vector<double>{0, 0}) == 0);
  CHECK(eval_mv1(std::vector<double>{2, 3}, std::vector<double>{0, 0.1}) > 0);
  CHECK_THROWS_AS(eval_mv1(std::vector<double>{1}, std::vector<double>{}),
                  quantopt::Error);
}

TEST_CASE("benchmark boxes") {
  const auto mv4 = quantopt::mv_spec(quantopt::MvId::mv4, 3);
  CHECK(mv4.design_box == quantopt::Box::cube(3, 0.0, 2 * std::numbers::pi));
  CHECK(mv4.uncertainty_box == quantopt::Box::cube(3, 0.0, 3.0));
  const auto mv1 = quantopt::mv_spec(quantopt::MvId::mv1, 2);
  CHECK(mv1.design_box == quantopt::Box::cube(2, 1.0, 5.0));
  CHECK(mv1.uncertainty_box == quantopt::Box::cube(2, -5.0, 3.0));
}

TEST_CASE("mv4 references agree with an exhaustive grid search") {
  const auto refs = quantopt::mv4_reference_solutions(1);
  CHECK(refs.min.value == Approx(quantopt::kMv4MinValue).epsilon(1e-6));
  CHECK(refs.minimax.value == Approx(quantopt::kMv4MinimaxValue).epsilon(1e-5));

  // Grid oracle with spacing 1e-3 over d in [0, 2 pi], u in [0, 3]. The
  // worst case has a kink at the minimax design with slope near 2 pi, so the
  // coarse d grid is refined around its argmin.
  constexpr double step = 1e-3;
  const int nu = static_cast<int>(3.0 / step) + 1;
  auto f = [](double d, double u) { return (2 * std::numbers::pi - u) * std::cos(u - d); };
  auto worst = [&](double d) {
    double w = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < nu; ++j) w = std::max(w, f(d, j * step));
    return w;
  };
  const int nd = static_cast<int>(2 * std::numbers::pi / step) + 1;
  double global_min = std::numeric_limits<double>::infinity();
  double minimax = std::numeric_limits<double>::infinity();
  double argmin = 0.0;
  for (int i = 0; i < nd; ++i) {
    const double d = std::min(i * step, 2 * std::numbers::pi);
    for (int j = 0; j < nu; ++j) global_min = std::min(global_min, f(d, j * step));
    const double w = worst(d);
    if (w < minimax) {
      minimax = w;
      argmin = d;
    }
  }
  for (int i = -1000; i <= 1000; ++i) {
    const double d = argmin + i * 1e-6;
    const double w = worst(d);
    if (w < minimax) {
      minimax = w;
      argmin = d;
    }
  }
  CHECK(std::abs(global_min - refs.min.value) < 1e-3);
  CHECK(std::abs(minimax - refs.minimax.value) < 1e-3);
  CHECK(std::abs(argmin - quantopt::kMv4MinimaxDesign) < 1e-3);

  const auto refs6 = quantopt::mv4_reference_solutions(6);
  CHECK(refs6.min.design.size() == 6);
  CHECK(refs6.min.value == Approx(refs.min.value).epsilon(1e-12));
  CHECK(refs6.minimax.value == Approx(refs.minimax.value).epsilon(1e-12));
}

TEST_CASE("multiset counting") {
  CHECK(quantopt::multiset_count(2, 2) == 3);
  CHECK(quantopt::multiset_count(1, 6) == 1);
  CHECK(quantopt::multiset_count(10, 3) == 220);
  CHECK(quantopt::multiset_count(200, 4) == 68685050);
  CHECK(quantopt::multiset_count(1000000, 40) ==
        std::numeric_limits<std::size_t>::max());
}

TEST_CASE("compose front from one dimension") {
  auto evaluator = [](std::span<const double> d) {
    // Permutation-invariant two-objective toy: (mean, -min).
    double sum = 0.0, lo = d[0];
    for (double x : d) {
      sum += x;
      lo = std::min(lo, x);
    }
    return std::vector<double>{sum / d.size(), -lo};
  };

  const std::vector<FrontPoint> one{{{2.0}, {2.0, -2.0}}};
  const auto single = quantopt::compose_front_from_1d(one, 4, evaluator);
  REQUIRE(single.size() == 1);
  CHECK(single[0].design == std::vector<double>{2, 2, 2, 2});

  // Two designs at n = 2: candidates {a,a}, {a,b}, {b,b}.
  std::size_t calls = 0;
  auto counting = [&](std::span<const double> d) {
    ++calls;
    return evaluator(d);
  };
  const std::vector<FrontPoint> two{{{1.0}, {}}, {{3.0}, {}}};
  const auto composed = quantopt::compose_front_from_1d(two, 2, counting);
  CHECK(calls == 3);
  CHECK(composed.size() <= 3);

  CHECK_THROWS_AS(quantopt::compose_front_from_1d({}, 2, evaluator),
                  quantopt::Error);
  std::vector<FrontPoint> many;
  for (int i = 0; i < 200; ++i) many.push_back({{i * 0.01}, {}});
  CHECK_THROWS_WITH_AS(quantopt::compose_front_from_1d(many, 4, evaluator, 1000000),
                       doctest::Contains("thin the one-dimensional front"),
                       quantopt::Error);
}

TEST_CASE("property: composed mv4 front is mutually non-dominated") {
  std::vector<FrontPoint> front_1d;
  for (int i = 0; i < 25; ++i) front_1d.push_back({{3.0 + 0.08 * i}, {}});
  // Deterministic surrogate objectives: (min over u, max over u) on a grid.
  auto evaluator = [](std::span<const double> d) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::vector<double> u(d.size());
    for (int k = 0; k <= 30; ++k) {
      std::fill(u.begin(), u.end(), k * 0.1);
      const double f = quantopt::eval_mv4(d, u);
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
    return std::vector<double>{lo, hi};
  };
  const auto composed = quantopt::compose_front_from_1d(front_1d, 3, evaluator,
                                                        quantopt::kDefaultComposeCap, 4);
  REQUIRE_FALSE(composed.empty());
  for (const auto& a : composed) {
    CHECK(std::is_sorted(a.design.begin(), a.design.end()));
    for (const auto& b : composed) {
      CHECK_FALSE(quantopt::dominates(a.objectives, b.objectives));
    }
  }
}
