#pragma once

#include <span>
#include <vector>

#include "rmtk/demand.hpp"
#include "rmtk/relaxed.hpp"
#include "rmtk/scenario.hpp"

namespace rmtk {

// One chosen ladder price per (product, time step).
//
// Entries with t > start_time were not optimized (those steps are already in
// the past); they hold the product's ladder maximum as a placeholder and are
// excluded from expected_revenue / expected_demand.
struct PricingPlan {
  std::vector<std::vector<double>> prices;  // [product][t]
  double expected_revenue = 0.0;
  double expected_demand = 0.0;
  int start_time = 0;
  // False when even the all-maximum-price completion exceeds capacity; the
  // plan then holds ladder maxima everywhere instead of failing silently.
  bool feasible = true;
};

struct SearchConfig {
  // Restrict to prices non-decreasing toward departure (per product).
  bool monotone_prices = false;
  // Exact solver budget: both the admissible product of pruned ladder sizes
  // and the number of explored nodes.
  long exact_size_limit = 2000000;
  // Slack when pruning against the incumbent; keep well below one currency
  // unit so the exact optimum is never pruned away.
  double bound_tolerance = 1e-9;
};

// Drops every ladder price that some higher price matches or beats in
// expected revenue (the higher price also frees capacity, so it can never be
// worse under the capacity constraint). Keeps the constrained optimum intact.
std::vector<double> prune_dominated_prices(std::span<const double> ladder,
                                           const DemandCurve& curve);

// A not-yet-fixed cell reduced to what feasibility pruning needs.
struct PricedCell {
  DemandCurve curve;
  double max_price = 0.0;
};

// Least total demand any completion of these cells can induce (every price at
// its ladder maximum). If fixed demand plus this exceeds capacity, no
// completion is feasible.
double residual_min_demand(std::span<const PricedCell> cells);

// Precomputed immutable search data for one scenario, shared by the greedy
// and exact searches and reused across rolling re-solves. Cells are listed in
// selling order: t = horizon-1 down to 0, products in scenario order within a
// step, so the active cells for any start_time form a suffix.
struct SearchCell {
  int product = 0;
  int time_step = 0;
  DemandCurve curve;
  std::vector<double> prices;    // pruned ladder, ascending
  std::vector<double> demands;   // expected demand per pruned price
  std::vector<double> revenues;  // price * demand per pruned price
  double min_demand = 0.0;       // demand at the full-ladder maximum
};

struct SearchContext {
  int n_products = 0;
  int horizon = 0;
  std::vector<double> ladder_max;     // per product
  std::vector<SearchCell> cells;      // n_products * horizon, selling order
  std::vector<DemandCurve> curves;    // alpha > 0 curves, selling order
  std::vector<std::size_t> curve_at;  // cells.size()+1; suffix k maps to curves[curve_at[k]..]
  std::vector<double> suffix_min;     // cells.size()+1; min demand of suffix k
};

SearchContext build_search_context(const Scenario& s);

// Bound-guided greedy: fixes cells in selling order, descending into the
// child with the best relaxed bound (ties to the higher price), backtracking
// one level when every child is infeasible. Returns the first complete
// feasible plan.
PricingPlan greedy_optimize(const SearchContext& ctx, double capacity, int start_time,
                            const SearchConfig& config = {});
PricingPlan greedy_optimize(const Scenario& s, double capacity, int start_time,
                            const SearchConfig& config = {});

// Best-first branch and bound; the true discrete optimum for instances small
// enough for the configured budget. Throws NumericalError when the budget is
// exceeded.
PricingPlan exact_optimize(const SearchContext& ctx, double capacity,
                           const SearchConfig& config = {});
PricingPlan exact_optimize(const Scenario& s, double capacity,
                           const SearchConfig& config = {});

struct PlanStats {
  double expected_revenue = 0.0;
  double expected_demand = 0.0;
  double bound_ratio = 0.0;  // revenue / relaxed bound over the same cells
};

// Recomputes the plan's value from the demand model (independent of the
// search's running sums) and relates it to the global relaxed bound.
PlanStats plan_stats(const PricingPlan& plan, const Scenario& s, double capacity);

}  // namespace rmtk
