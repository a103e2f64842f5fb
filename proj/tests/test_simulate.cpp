#include <cmath>

#include <doctest.h>

#include "rmtk/policies.hpp"
#include "rmtk/rng.hpp"
#include "rmtk/simulate.hpp"
#include "oracles.hpp"

using namespace rmtk;
using doctest::Approx;

namespace {

Scenario small_scenario(double q, double frat5, std::vector<double> ladder,
                        int horizon = 1, int capacity = 1000) {
  Scenario s;
  s.capacity = capacity;
  s.horizon = horizon;
  Product p;
  p.id = "Y";
  p.price_ladder = std::move(ladder);
  for (int t = 0; t < horizon; ++t) p.cells.push_back({q, frat5});
  s.products.push_back(std::move(p));
  return s;
}

// The 60-passenger ordered arrival list: six groups of ten.
std::vector<ArrivalEvent> worked_example_arrivals() {
  std::vector<ArrivalEvent> events;
  auto group = [&](int family, double wtp) {
    for (int i = 0; i < 10; ++i) events.push_back({family, wtp, 0});
  };
  group(0, 1200.0);
  group(0, 1000.0);
  group(1, 800.0);
  group(0, 1200.0);
  group(0, 1200.0);
  group(1, 800.0);
  return events;
}

AvailabilityPolicy one_step_policy(const NestedPolicy& nested,
                                   const std::vector<std::string>& ids) {
  AvailabilityPolicy policy;
  policy.horizon = 1;
  policy.as_of_time = 0;
  policy.steps.push_back(step_policy_from_nested(nested, ids));
  return policy;
}

std::vector<AdjustedClass> identity_pool(const std::vector<FareClass>& classes) {
  std::vector<AdjustedClass> pooled;
  for (const FareClass& c : classes) {
    AdjustedClass a;
    a.origin = c;
    a.adjusted_fare = c.fare;
    a.adjusted_mean = c.mean_demand;
    a.adjusted_std = c.std_demand;
    pooled.push_back(a);
  }
  return pooled;
}

const std::vector<FareClass> kWorkedClasses{{"F1", 1200.0, 31.0, 0.0},
                                            {"F1", 1000.0, 11.0, 0.0},
                                            {"F2", 800.0, 15.0, 0.0}};

}  // namespace

TEST_CASE("sample_arrivals: zero demand means no events") {
  const Scenario s = small_scenario(0.0, 2.0, {100.0});
  CHECK(sample_arrivals(s, 0, 123).empty());
}

TEST_CASE("sample_arrivals is deterministic in the step seed") {
  const Scenario s = small_scenario(7.0, 2.0, {100.0});
  const auto a = sample_arrivals(s, 0, 99);
  const auto b = sample_arrivals(s, 0, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].family == b[k].family);
    CHECK(a[k].wtp == b[k].wtp);
  }
  const auto c = sample_arrivals(s, 0, 100);
  CHECK((c.size() != a.size() || c.empty() || c[0].wtp != a[0].wtp));
}

TEST_CASE("sampled willingness to pay respects the support") {
  const Scenario s = small_scenario(20.0, 2.0, {100.0});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (const ArrivalEvent& ev : sample_arrivals(s, 0, seed)) {
      REQUIRE(ev.wtp >= 100.0);
    }
  }
}

TEST_CASE("worked example: MRT availability earns 43200 over 39 sales") {
  std::vector<AdjustedClass> pooled;
  for (auto& a : mr_transform(std::span(kWorkedClasses).subspan(0, 2))) {
    if (a.adjusted_fare > 0.0) pooled.push_back(a);
  }
  for (auto& a : mr_transform(std::span(kWorkedClasses).subspan(2, 1))) {
    if (a.adjusted_fare > 0.0) pooled.push_back(a);
  }
  const auto policy = one_step_policy(emsrb_nested(std::move(pooled), 40.0), {"F1", "F2"});
  const auto arrivals = worked_example_arrivals();
  const SimulationOutcome out = simulate_policy_arrivals(arrivals, policy, 40);
  CHECK(out.revenue == 43200.0);
  CHECK(out.seats_sold == 39);
}

TEST_CASE("worked example: classic availability earns 34200 over 30 sales") {
  const auto policy =
      one_step_policy(emsrb_nested(identity_pool(kWorkedClasses), 40.0), {"F1", "F2"});
  const auto arrivals = worked_example_arrivals();
  const SimulationOutcome out = simulate_policy_arrivals(arrivals, policy, 40);
  CHECK(out.revenue == 34200.0);
  CHECK(out.seats_sold == 30);
}

TEST_CASE("buyers take the cheapest open fare at or below their budget") {
  // Two open fares; a budget between them buys the cheap one; a budget below
  // both buys nothing even though a dearer fare is open.
  AvailabilityPolicy policy;
  policy.horizon = 1;
  policy.as_of_time = 0;
  StepPolicy step;
  step.entries.push_back({0, "F1", 300.0, 5.0});
  step.entries.push_back({0, "F1", 500.0, 5.0});
  policy.steps.push_back(step);
  const std::vector<ArrivalEvent> arrivals{{0, 450.0, 0}, {0, 250.0, 0}, {0, 600.0, 0}};
  const SimulationOutcome out = simulate_policy_arrivals(arrivals, policy, 10);
  CHECK(out.seats_sold == 2);
  CHECK(out.revenue == 600.0);  // both sales at the cheapest open fare 300
}

TEST_CASE("zero capacity sells nothing") {
  const auto policy =
      one_step_policy(emsrb_nested(identity_pool(kWorkedClasses), 0.0), {"F1", "F2"});
  const SimulationOutcome out =
      simulate_policy_arrivals(worked_example_arrivals(), policy, 0);
  CHECK(out.seats_sold == 0);
  CHECK(out.revenue == 0.0);
}

TEST_CASE("fixed prices nobody can afford sell nothing") {
  const Scenario s = small_scenario(10.0, 2.0, {100.0, 1e15});
  PricingPlan plan;
  plan.prices = {{1e15}};
  plan.start_time = 0;
  const SimulationOutcome out = simulate_fixed_prices(s, plan, 100, 7);
  CHECK(out.seats_sold == 0);
  CHECK(out.revenue == 0.0);
}

TEST_CASE("fixed prices at the minimum sell to every arrival until capacity") {
  const Scenario s = small_scenario(40.0, 2.0, {100.0, 200.0});
  PricingPlan plan;
  plan.prices = {{100.0}};
  plan.start_time = 0;
  SUBCASE("ample capacity") {
    const SimulationOutcome out = simulate_fixed_prices(s, plan, 1000, 11);
    CHECK(out.seats_sold == out.ledger[0].arrivals);
    CHECK(out.revenue == 100.0 * out.seats_sold);
  }
  SUBCASE("binding capacity") {
    const SimulationOutcome out = simulate_fixed_prices(s, plan, 5, 11);
    CHECK(out.seats_sold == 5);
  }
}

TEST_CASE("fixed-price mean revenue matches the analytic expectation") {
  // Non-binding capacity: E[revenue] = sum over cells of p * Q * survival(p).
  const Scenario s = small_scenario(6.0, 2.0, {100.0, 180.0}, 3, 1000);
  PricingPlan plan;
  plan.prices = {{180.0, 180.0, 180.0}};
  plan.start_time = 2;
  const double expectation =
      3 * 180.0 * 6.0 * survival_probability(2.0, 100.0, 180.0);
  const int n = 3000;
  const MonteCarloStats mc = monte_carlo(
      [&](std::uint64_t seed, int) { return simulate_fixed_prices(s, plan, 1000, seed); },
      n, 424242);
  const double se = mc.std_revenue / std::sqrt(double(n));
  CHECK(std::abs(mc.mean_revenue - expectation) < 4 * se);
}

TEST_CASE("rolling greedy: zero actual demand earns nothing") {
  const Scenario estimated = small_scenario(8.0, 2.0, {100.0, 150.0, 200.0}, 4, 30);
  Scenario actual = estimated;
  for (auto& cell : actual.products[0].cells) cell.mean_demand_at_min = 0.0;
  const SimulationOutcome out = simulate_greedy_rolling(estimated, actual, 30, 5);
  CHECK(out.revenue == 0.0);
  CHECK(out.seats_sold == 0);
}

TEST_CASE("rolling greedy conserves seats and stops at capacity") {
  const Scenario s = small_scenario(12.0, 2.0, {100.0, 150.0, 200.0}, 5, 20);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SimulationOutcome out = simulate_greedy_rolling(s, s, 20, seed);
    REQUIRE(out.seats_sold <= 20);
    int ledger_sales = 0;
    double ledger_revenue = 0.0;
    for (const StepLedger& row : out.ledger) {
      REQUIRE(row.sales <= row.arrivals);
      ledger_sales += row.sales;
      ledger_revenue += row.revenue;
    }
    REQUIRE(ledger_sales == out.seats_sold);
    REQUIRE(ledger_revenue == Approx(out.revenue).epsilon(1e-12));
  }
}

TEST_CASE("rolling greedy rejects shape mismatches") {
  const Scenario a = small_scenario(5.0, 2.0, {100.0, 200.0}, 2);
  Scenario b = a;
  b.products[0].price_ladder = {100.0, 250.0};
  CHECK_THROWS_AS(simulate_greedy_rolling(a, b, 10, 1), std::invalid_argument);
}

TEST_CASE("policy simulation is seed deterministic, ledger included") {
  const Scenario s = small_scenario(9.0, 2.2, {100.0, 160.0, 250.0}, 4, 25);
  const AvailabilityPolicy policy = mrt_emsrb_policy(s, 25, s.horizon - 1);
  const SimulationOutcome a = simulate_policy(s, policy, 25, 77);
  const SimulationOutcome b = simulate_policy(s, policy, 25, 77);
  CHECK(a.revenue == b.revenue);
  CHECK(a.seats_sold == b.seats_sold);
  REQUIRE(a.ledger.size() == b.ledger.size());
  for (std::size_t k = 0; k < a.ledger.size(); ++k) {
    CHECK(a.ledger[k].arrivals == b.ledger[k].arrivals);
    CHECK(a.ledger[k].sales == b.ledger[k].sales);
    CHECK(a.ledger[k].revenue == b.ledger[k].revenue);
  }
}

TEST_CASE("malformed policies are rejected") {
  const Scenario s = small_scenario(5.0, 2.0, {100.0}, 3, 50);
  SUBCASE("missing steps") {
    AvailabilityPolicy policy;
    policy.horizon = 3;
    policy.as_of_time = 2;
    policy.steps.resize(1);  // does not cover the horizon
    CHECK_THROWS_AS(simulate_policy(s, policy, 50, 1), std::invalid_argument);
  }
  SUBCASE("unknown family") {
    AvailabilityPolicy policy;
    policy.horizon = 3;
    policy.as_of_time = 2;
    policy.steps.resize(3);
    policy.steps[2].entries.push_back({7, "ghost", 100.0, 5.0});
    CHECK_THROWS_AS(simulate_policy(s, policy, 50, 1), std::invalid_argument);
  }
}

TEST_CASE("monte_carlo conventions") {
  const Scenario s = small_scenario(5.0, 2.0, {100.0}, 1, 50);
  PricingPlan plan;
  plan.prices = {{100.0}};
  plan.start_time = 0;
  auto run = [&](std::uint64_t seed, int) {
    return simulate_fixed_prices(s, plan, 50, seed);
  };
  SUBCASE("n = 1 reports zero deviation with a flag") {
    const MonteCarloStats mc = monte_carlo(run, 1, 5);
    CHECK(mc.single_replication);
    CHECK(mc.std_revenue == 0.0);
  }
  SUBCASE("constant outcomes have zero deviation") {
    auto constant = [&](std::uint64_t, int) {
      SimulationOutcome out;
      out.revenue = 42.0;
      out.seats_sold = 1;
      return out;
    };
    const MonteCarloStats mc = monte_carlo(constant, 10, 5);
    CHECK(mc.std_revenue == 0.0);
    CHECK(mc.mean_revenue == 42.0);
  }
  SUBCASE("rejects zero replications") {
    CHECK_THROWS_AS(monte_carlo(run, 0, 5), std::invalid_argument);
  }
  SUBCASE("master seed reproduces outcomes exactly") {
    const MonteCarloStats a = monte_carlo(run, 20, 5);
    const MonteCarloStats b = monte_carlo(run, 20, 5);
    REQUIRE(a.outcomes.size() == b.outcomes.size());
    for (std::size_t k = 0; k < a.outcomes.size(); ++k) {
      CHECK(a.outcomes[k].revenue == b.outcomes[k].revenue);
      CHECK(a.outcomes[k].seed == b.outcomes[k].seed);
    }
  }
}
