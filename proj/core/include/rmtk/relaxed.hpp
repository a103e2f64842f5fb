#pragma once

#include <span>
#include <vector>

#include "rmtk/demand.hpp"
#include "rmtk/scenario.hpp"

namespace rmtk {

struct KktResiduals {
  double gradient_residual = 0.0;        // |f'(mu*)|
  double capacity_slack = 0.0;           // C - sum of demands at p*, signed
  double complementary_slackness = 0.0;  // mu* * f'(mu*)
  double duality_gap = 0.0;              // |f(mu*) - primal value at p*|
};

// Solution of the one-dimensional dual of the price-relaxed problem.
// Every price satisfies p*[k] = mu_star + 1/beta[k] exactly; bound is the
// dual objective at mu_star and upper-bounds any feasible discrete plan.
struct DualSolution {
  double mu_star = 0.0;
  std::vector<double> prices;  // aligned with the input cells
  double bound = 0.0;
  int newton_iterations = 0;
  KktResiduals kkt;
};

// Dual objective f(mu) = mu*C + sum alpha/beta * exp(-beta*mu - 1).
// Strictly convex in mu; cells with alpha = 0 contribute nothing.
double dual_objective(std::span<const DemandCurve> cells, double capacity, double mu);

// f'(mu) = C - sum alpha * exp(-beta*mu - 1); strictly increasing in mu.
double dual_gradient(std::span<const DemandCurve> cells, double capacity, double mu);

// Newton from mu = 0 with a bracketing safeguard (bisection fallback on a
// [lo, hi] interval grown by doubling). Convergence is |f'(mu)| <= tol * C.
// Throws NumericalError on all-zero demand or non-convergence.
DualSolution solve_dual(std::span<const DemandCurve> cells, double capacity,
                        double tol = 1e-9, int max_iter = 100);

// Allocation-free dual solve used in search inner loops. All cells must have
// alpha > 0; warm_mu seeds the iteration (pass 0 when unknown).
struct DualBoundResult {
  double value = 0.0;
  double mu = 0.0;
  int iterations = 0;
};
DualBoundResult dual_bound(std::span<const DemandCurve> cells, double capacity,
                           double warm_mu, double tol = 1e-9, int max_iter = 100);

// One (product, time step) cell pinned to a ladder price.
struct FixedPrice {
  int product = 0;
  int time_step = 0;
  double price = 0.0;
};

// Revenue of the fixed cells plus the dual bound over everything else with
// the residual capacity. With no fixed cells this is the global upper bound.
// start_time < 0 means the whole horizon; cells with t > start_time are
// ignored (already in the past). Throws InfeasibleError when the fixed cells
// alone exceed capacity.
double relaxed_bound(const Scenario& s, double capacity,
                     std::span<const FixedPrice> fixed = {}, int start_time = -1);

}  // namespace rmtk
