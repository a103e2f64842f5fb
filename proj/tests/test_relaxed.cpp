#include <cmath>

#include <doctest.h>

#include "rmtk/errors.hpp"
#include "rmtk/relaxed.hpp"
#include "rmtk/rng.hpp"
#include "oracles.hpp"

using namespace rmtk;
using doctest::Approx;

namespace {

const DemandCurve kCell = curve_from_frat5(100.0, 2.0, 100.0);  // alpha 200, beta ln2/100

Scenario single_cell_scenario(double capacity) {
  Scenario s;
  s.capacity = static_cast<int>(capacity);
  s.horizon = 1;
  Product p;
  p.id = "Y";
  p.price_ladder = {100.0, 200.0};
  p.cells = {{100.0, 2.0}};
  s.products.push_back(std::move(p));
  return s;
}

}  // namespace

TEST_CASE("dual objective: no demand is linear in mu") {
  const std::vector<DemandCurve> none;
  CHECK(dual_objective(none, 180.0, 0.0) == 0.0);
  CHECK(dual_objective(none, 180.0, 2.5) == Approx(450.0));
}

TEST_CASE("dual objective single cell at mu = 0") {
  const std::vector<DemandCurve> cells{kCell};
  const double expected = kCell.alpha / kCell.beta * std::exp(-1.0);
  CHECK(dual_objective(cells, 180.0, 0.0) == Approx(expected).epsilon(1e-12));
  CHECK(expected == Approx(10614.7569).epsilon(1e-8));
}

TEST_CASE("dual objective is convex") {
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    std::vector<DemandCurve> cells;
    const int n = 1 + static_cast<int>(rng.below(6));
    for (int k = 0; k < n; ++k) {
      cells.push_back(curve_from_frat5(1.0 + 30.0 * rng.uniform01(),
                                       1.3 + 2.0 * rng.uniform01(),
                                       50.0 + 300.0 * rng.uniform01()));
    }
    const double a = 200.0 * rng.uniform01();
    const double b = 200.0 * rng.uniform01();
    const double mid = dual_objective(cells, 100.0, 0.5 * (a + b));
    const double avg = 0.5 * (dual_objective(cells, 100.0, a) +
                              dual_objective(cells, 100.0, b));
    REQUIRE(mid <= avg + 1e-9 * std::abs(avg));
  }
}

TEST_CASE("dual gradient limits and closed form") {
  const std::vector<DemandCurve> cells{kCell};
  CHECK(dual_gradient(cells, 180.0, 1e6) == Approx(180.0).epsilon(1e-9));
  CHECK(dual_gradient(cells, 180.0, 0.0) ==
        Approx(180.0 - 200.0 / std::exp(1.0)).epsilon(1e-12));
  CHECK(180.0 - 200.0 / std::exp(1.0) == Approx(106.42).epsilon(1e-4));
}

TEST_CASE("dual gradient matches finite differences of the objective") {
  Rng rng(77);
  std::vector<DemandCurve> cells;
  for (int k = 0; k < 5; ++k) {
    cells.push_back(curve_from_frat5(5.0 + 20.0 * rng.uniform01(),
                                     1.5 + rng.uniform01(),
                                     100.0 + 200.0 * rng.uniform01()));
  }
  const double h = 1e-4;
  for (double mu : {0.0, 10.0, 55.0, 200.0}) {
    const double fd = (dual_objective(cells, 120.0, mu + h) -
                       dual_objective(cells, 120.0, mu - h)) / (2.0 * h);
    REQUIRE(std::abs(fd - dual_gradient(cells, 120.0, mu)) <= 1e-6);
  }
}

TEST_CASE("solve_dual, capacity slack: unconstrained peak prices") {
  const std::vector<DemandCurve> cells{kCell};
  const DualSolution sol = solve_dual(cells, 180.0);
  CHECK(sol.mu_star == 0.0);
  CHECK(sol.prices[0] == Approx(1.0 / kCell.beta).epsilon(1e-12));
  CHECK(sol.prices[0] == Approx(144.2695).epsilon(1e-6));
  CHECK(sol.bound == Approx(10614.7569).epsilon(1e-8));
  CHECK(sol.kkt.capacity_slack > 0.0);
}

TEST_CASE("solve_dual, active capacity: analytic root") {
  const std::vector<DemandCurve> cells{kCell};
  const DualSolution sol = solve_dual(cells, 50.0);
  // alpha e^{-beta p} = 50 at p = ln(4)/beta = 200.
  CHECK(sol.prices[0] == Approx(200.0).epsilon(1e-9));
  CHECK(sol.mu_star == Approx(200.0 - 1.0 / kCell.beta).epsilon(1e-9));
  CHECK(sol.mu_star == Approx(55.7305).epsilon(1e-5));
  CHECK(sol.bound == Approx(10000.0).epsilon(1e-9));
  CHECK(sol.newton_iterations <= 50);
  CHECK(sol.kkt.gradient_residual <= 1e-9 * 50.0);
  CHECK(std::abs(sol.kkt.complementary_slackness) <= 1e-9 * 50.0);
}

TEST_CASE("solve_dual symmetry: doubled instance keeps per-cell prices") {
  const std::vector<DemandCurve> one{kCell};
  const std::vector<DemandCurve> two{kCell, kCell};
  const DualSolution a = solve_dual(one, 50.0);
  const DualSolution b = solve_dual(two, 100.0);
  CHECK(b.mu_star == Approx(a.mu_star).epsilon(1e-9));
  CHECK(b.prices[0] == Approx(a.prices[0]).epsilon(1e-9));
  CHECK(b.prices[1] == Approx(a.prices[0]).epsilon(1e-9));
  CHECK(b.bound == Approx(2.0 * a.bound).epsilon(1e-9));
}

TEST_CASE("solve_dual rejects all-zero demand") {
  const std::vector<DemandCurve> cells{curve_from_frat5(0.0, 2.0, 100.0)};
  CHECK_THROWS_AS(solve_dual(cells, 50.0), NumericalError);
}

TEST_CASE("price identity, duality gap and KKT on random scenarios") {
  Rng rng(12);
  for (int i = 0; i < 60; ++i) {
    std::vector<DemandCurve> cells;
    const int n = 2 + static_cast<int>(rng.below(40));
    for (int k = 0; k < n; ++k) {
      cells.push_back(curve_from_frat5(0.5 + 8.0 * rng.uniform01(),
                                       1.3 + 2.0 * rng.uniform01(),
                                       100.0 + 500.0 * rng.uniform01()));
    }
    const double capacity = 20.0 + 180.0 * rng.uniform01();
    const DualSolution sol = solve_dual(cells, capacity);
    // All prices share the single offset mu*.
    for (std::size_t k = 0; k < cells.size(); ++k) {
      REQUIRE(sol.prices[k] - 1.0 / cells[k].beta == Approx(sol.mu_star).epsilon(1e-9));
    }
    REQUIRE(sol.kkt.duality_gap <= 1e-6 * std::max(1.0, sol.bound));
    double total_demand = 0.0;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      total_demand += expected_demand(cells[k], sol.prices[k]);
    }
    if (sol.mu_star > 0.0) {
      REQUIRE(std::abs(total_demand - capacity) <= 1e-6 * capacity);
    } else {
      REQUIRE(total_demand <= capacity + 1e-9);
    }
  }
}

TEST_CASE("prices rise toward departure when wtp grows") {
  // FRAT5 grows as t falls => beta shrinks => 1/beta grows; prices must
  // follow since they all share the mu* offset.
  Scenario s;
  s.capacity = 60;
  s.horizon = 10;
  Product p;
  p.id = "Y";
  p.price_ladder = {100.0, 400.0};
  for (int t = 0; t < s.horizon; ++t) {
    p.cells.push_back({8.0, 2.5 - 0.1 * t});  // t = 0 has the largest FRAT5
  }
  s.products.push_back(std::move(p));

  std::vector<DemandCurve> cells;
  for (int t = s.horizon - 1; t >= 0; --t) {  // selling order
    cells.push_back(curve_for_cell(s.products[0], s.products[0].cells[t]));
  }
  const DualSolution sol = solve_dual(cells, s.capacity);
  for (std::size_t k = 1; k < sol.prices.size(); ++k) {
    REQUIRE(sol.prices[k] >= sol.prices[k - 1] - 1e-12);
  }
}

TEST_CASE("relaxed_bound with everything fixed is plain expected revenue") {
  const Scenario s = single_cell_scenario(50);
  const std::vector<FixedPrice> fixed{{0, 0, 200.0}};
  const double revenue = 200.0 * expected_demand(kCell, 200.0);
  CHECK(relaxed_bound(s, 50.0, fixed) == Approx(revenue).epsilon(1e-12));
}

TEST_CASE("relaxed_bound with empty assignment reproduces the dual bound") {
  const Scenario s = single_cell_scenario(50);
  CHECK(relaxed_bound(s, 50.0) == Approx(10000.0).epsilon(1e-9));
}

TEST_CASE("relaxed_bound rejects off-ladder and duplicate fixes") {
  const Scenario s = single_cell_scenario(50);
  CHECK_THROWS_AS(relaxed_bound(s, 50.0, std::vector<FixedPrice>{{0, 0, 123.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(relaxed_bound(s, 50.0,
                                std::vector<FixedPrice>{{0, 0, 200.0}, {0, 0, 100.0}}),
                  std::invalid_argument);
}

TEST_CASE("relaxed_bound signals infeasible partial assignments") {
  const Scenario s = single_cell_scenario(50);
  Scenario two = s;
  two.horizon = 2;
  two.products[0].cells.push_back({100.0, 2.0});
  // Fixing t=1 at price 100 already sells ~100 > 20 seats.
  CHECK_THROWS_AS(relaxed_bound(two, 20.0, std::vector<FixedPrice>{{0, 1, 100.0}}),
                  InfeasibleError);
}

TEST_CASE("bound dominates every feasible full assignment") {
  Rng rng(2718);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const Scenario s = test::random_tiny_scenario(rng);
    const auto oracle = test::enumerate_best(s, s.capacity);
    if (!oracle.feasible) continue;
    double bound;
    try {
      bound = relaxed_bound(s, s.capacity);
    } catch (const NumericalError&) {
      continue;  // all-zero demand instance
    }
    REQUIRE(bound >= oracle.best_revenue - 1e-6 * std::max(1.0, oracle.best_revenue));
    ++checked;
  }
  CHECK(checked > 50);
}
