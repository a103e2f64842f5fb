#include "rmtk/experiment.hpp"

#include <stdexcept>

#include "rmtk/demand.hpp"
#include "rmtk/discrete.hpp"
#include "rmtk/errors.hpp"
#include "rmtk/policies.hpp"
#include "rmtk/relaxed.hpp"

namespace rmtk {

PolicyKind parse_policy(const std::string& name) {
  if (name == "relaxed") return PolicyKind::relaxed;
  if (name == "greedy") return PolicyKind::greedy;
  if (name == "exact") return PolicyKind::exact;
  if (name == "emsrb") return PolicyKind::emsrb;
  if (name == "mrt-emsrb") return PolicyKind::mrt_emsrb;
  throw std::invalid_argument("unknown policy '" + name +
                              "' (expected relaxed|greedy|exact|emsrb|mrt-emsrb)");
}

std::string policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::relaxed: return "relaxed";
    case PolicyKind::greedy: return "greedy";
    case PolicyKind::exact: return "exact";
    case PolicyKind::emsrb: return "emsrb";
    case PolicyKind::mrt_emsrb: return "mrt-emsrb";
  }
  return "?";
}

int effective_capacity(const Scenario& s, const ExperimentConfig& cfg) {
  return cfg.capacity >= 0 ? cfg.capacity : s.capacity;
}

namespace {

void check_same_shape(const Scenario& a, const Scenario& b) {
  bool ok = a.horizon == b.horizon && a.products.size() == b.products.size();
  for (std::size_t i = 0; ok && i < a.products.size(); ++i) {
    ok = a.products[i].id == b.products[i].id &&
         a.products[i].price_ladder == b.products[i].price_ladder;
  }
  if (!ok) {
    throw std::invalid_argument(
        "estimated and actual scenarios must share products, horizon and ladders");
  }
}

}  // namespace

MonteCarloStats run_policy_mc(const Scenario& estimated, const Scenario& actual,
                              PolicyKind kind, const ExperimentConfig& cfg) {
  check_same_shape(estimated, actual);
  const int capacity = effective_capacity(estimated, cfg);
  switch (kind) {
    case PolicyKind::relaxed:
      throw std::invalid_argument("policy 'relaxed' has no simulation");
    case PolicyKind::greedy:
      return monte_carlo(
          [&](std::uint64_t seed, int) {
            return simulate_greedy_rolling(estimated, actual, capacity, seed, cfg.search);
          },
          cfg.replications, cfg.master_seed);
    case PolicyKind::exact: {
      const PricingPlan plan = exact_optimize(estimated, capacity, cfg.search);
      return monte_carlo(
          [&](std::uint64_t seed, int) {
            return simulate_fixed_prices(actual, plan, capacity, seed);
          },
          cfg.replications, cfg.master_seed);
    }
    case PolicyKind::emsrb: {
      const AvailabilityPolicy policy =
          classic_emsrb_policy(estimated, capacity, estimated.horizon - 1);
      return monte_carlo(
          [&](std::uint64_t seed, int) {
            return simulate_policy(actual, policy, capacity, seed);
          },
          cfg.replications, cfg.master_seed);
    }
    case PolicyKind::mrt_emsrb: {
      const AvailabilityPolicy policy =
          mrt_emsrb_policy(estimated, capacity, estimated.horizon - 1);
      return monte_carlo(
          [&](std::uint64_t seed, int) {
            return simulate_policy(actual, policy, capacity, seed);
          },
          cfg.replications, cfg.master_seed);
    }
  }
  throw std::logic_error("unreachable policy kind");
}

ComparisonReport run_compare(const Scenario& s, const std::string& scenario_name,
                             std::span<const PolicyKind> policies,
                             const ExperimentConfig& cfg) {
  if (policies.empty()) throw std::invalid_argument("at least one policy required");
  const int capacity = effective_capacity(s, cfg);
  const double bound = relaxed_bound(s, capacity);

  ComparisonReport report;
  for (PolicyKind kind : policies) {
    ComparisonRow row;
    row.scenario = scenario_name;
    row.policy = policy_name(kind);
    row.bound = bound;
    if (kind == PolicyKind::relaxed) {
      // Expected-value row: the bound itself and the demand it carries.
      std::vector<DemandCurve> curves;
      for (const Product& p : s.products) {
        for (const DemandCell& cell : p.cells) {
          curves.push_back(curve_for_cell(p, cell));
        }
      }
      const DualSolution sol = solve_dual(curves, capacity);
      double seats = 0.0;
      for (std::size_t k = 0; k < curves.size(); ++k) {
        seats += expected_demand(curves[k], sol.prices[k]);
      }
      row.mean_revenue = sol.bound;
      row.std_revenue = 0.0;
      row.mean_seats = seats;
      row.std_seats = 0.0;
      row.bound_ratio = 1.0;
    } else {
      const MonteCarloStats mc = run_policy_mc(s, s, kind, cfg);
      row.mean_revenue = mc.mean_revenue;
      row.std_revenue = mc.std_revenue;
      row.mean_seats = mc.mean_seats;
      row.std_seats = mc.std_seats;
      row.bound_ratio = bound > 0.0 ? mc.mean_revenue / bound : 1.0;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

RobustnessReport run_robustness(const Scenario& estimated, const std::string& estimated_name,
                                const Scenario& actual, const std::string& actual_name,
                                std::span<const PolicyKind> policies,
                                const ExperimentConfig& cfg) {
  if (policies.empty()) throw std::invalid_argument("at least one policy required");
  check_same_shape(estimated, actual);

  RobustnessReport report;
  for (PolicyKind kind : policies) {
    if (kind == PolicyKind::relaxed) {
      throw std::invalid_argument("policy 'relaxed' has no simulation");
    }
    // Potential: what the policy earns against the actual arrivals when the
    // estimation is correct. Achieved: the same arrivals, but the policy was
    // built from the (wrong) estimated scenario.
    const MonteCarloStats potential = run_policy_mc(actual, actual, kind, cfg);
    const MonteCarloStats achieved = run_policy_mc(estimated, actual, kind, cfg);
    RobustnessRow row;
    row.estimated = estimated_name;
    row.actual = actual_name;
    row.policy = policy_name(kind);
    row.potential_revenue = potential.mean_revenue;
    row.achieved_revenue = achieved.mean_revenue;
    row.potential_seats = potential.mean_seats;
    row.achieved_seats = achieved.mean_seats;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace rmtk
