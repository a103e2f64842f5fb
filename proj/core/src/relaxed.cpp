#include "rmtk/relaxed.hpp"

#include <cmath>
#include <limits>

#include "rmtk/errors.hpp"

namespace rmtk {

double dual_objective(std::span<const DemandCurve> cells, double capacity, double mu) {
  double sum = 0.0;
  for (const DemandCurve& c : cells) {
    if (c.alpha == 0.0) continue;
    sum += c.alpha / c.beta * std::exp(-c.beta * mu - 1.0);
  }
  return mu * capacity + sum;
}

double dual_gradient(std::span<const DemandCurve> cells, double capacity, double mu) {
  double demand = 0.0;
  for (const DemandCurve& c : cells) {
    if (c.alpha == 0.0) continue;
    demand += c.alpha * std::exp(-c.beta * mu - 1.0);
  }
  return capacity - demand;
}

namespace {

struct GradAndCurv {
  double gradient;   // f'(mu)
  double curvature;  // f''(mu) > 0 while any cell has demand
};

GradAndCurv gradient_and_curvature(std::span<const DemandCurve> cells, double capacity,
                                   double mu) {
  double demand = 0.0;
  double curv = 0.0;
  for (const DemandCurve& c : cells) {
    if (c.alpha == 0.0) continue;
    const double q = c.alpha * std::exp(-c.beta * mu - 1.0);
    demand += q;
    curv += c.beta * q;
  }
  return {capacity - demand, curv};
}

}  // namespace

DualBoundResult dual_bound(std::span<const DemandCurve> cells, double capacity,
                           double warm_mu, double tol, int max_iter) {
  const double target = tol * capacity;
  int it = 1;
  const auto at_zero = gradient_and_curvature(cells, capacity, 0.0);
  if (at_zero.gradient >= 0.0 || at_zero.curvature == 0.0) {
    // Capacity already slack at the unconstrained optimum (or no demand).
    return {dual_objective(cells, capacity, 0.0), 0.0, it};
  }

  double lo = 0.0;  // invariant: f'(lo) < 0
  double hi = std::numeric_limits<double>::infinity();  // f'(hi) > 0 when finite
  double mu = warm_mu > 0.0 ? warm_mu : -at_zero.gradient / at_zero.curvature;

  while (true) {
    if (it >= max_iter) {
      throw NumericalError("dual solve did not converge within iteration budget");
    }
    const auto [g, curv] = gradient_and_curvature(cells, capacity, mu);
    ++it;
    if (std::abs(g) <= target || curv == 0.0) break;
    if (g < 0.0) {
      lo = std::max(lo, mu);
    } else {
      hi = std::min(hi, mu);
    }
    double next = mu - g / curv;
    if (!(next > lo && next < hi)) {
      // Newton left the bracket: grow the upper end until the gradient turns
      // positive, then bisect.
      if (!std::isfinite(hi)) {
        double probe = std::max(2.0 * std::max(lo, mu), 1.0);
        while (true) {
          if (it >= max_iter) {
            throw NumericalError("dual solve did not converge within iteration budget");
          }
          const double gp = dual_gradient(cells, capacity, probe);
          ++it;
          if (gp > 0.0) break;
          lo = probe;
          probe *= 2.0;
        }
        hi = probe;
      }
      next = 0.5 * (lo + hi);
    }
    if (next == mu) break;  // interval collapsed to machine precision
    mu = next;
  }
  return {dual_objective(cells, capacity, mu), mu, it};
}

DualSolution solve_dual(std::span<const DemandCurve> cells, double capacity,
                        double tol, int max_iter) {
  bool any_demand = false;
  for (const DemandCurve& c : cells) {
    if (c.alpha > 0.0) {
      any_demand = true;
      break;
    }
  }
  if (!any_demand) throw NumericalError("no demand: every cell has zero mean demand");

  const DualBoundResult r = dual_bound(cells, capacity, 0.0, tol, max_iter);

  DualSolution sol;
  sol.mu_star = r.mu;
  sol.newton_iterations = r.iterations;
  sol.bound = r.value;
  sol.prices.reserve(cells.size());
  double primal = 0.0;
  for (const DemandCurve& c : cells) {
    const double price = sol.mu_star + 1.0 / c.beta;
    sol.prices.push_back(price);
    if (c.alpha > 0.0) primal += price * c.alpha * std::exp(-c.beta * price);
  }
  const double g = dual_gradient(cells, capacity, sol.mu_star);
  sol.kkt.gradient_residual = std::abs(g);
  sol.kkt.capacity_slack = g;
  sol.kkt.complementary_slackness = sol.mu_star * g;
  sol.kkt.duality_gap = std::abs(sol.bound - primal);
  return sol;
}

double relaxed_bound(const Scenario& s, double capacity,
                     std::span<const FixedPrice> fixed, int start_time) {
  if (start_time < 0) start_time = s.horizon - 1;

  std::vector<char> is_fixed(s.products.size() * static_cast<std::size_t>(s.horizon), 0);
  double fixed_revenue = 0.0;
  double fixed_demand = 0.0;
  for (const FixedPrice& f : fixed) {
    if (f.product < 0 || f.product >= static_cast<int>(s.products.size()) ||
        f.time_step < 0 || f.time_step > start_time) {
      throw std::invalid_argument("fixed price outside the scenario's cell grid");
    }
    const Product& p = s.products[f.product];
    bool on_ladder = false;
    for (double lp : p.price_ladder) {
      if (lp == f.price || std::abs(lp - f.price) <= 1e-9 * lp) {
        on_ladder = true;
        break;
      }
    }
    if (!on_ladder) throw std::invalid_argument("fixed price not on the product's ladder");
    const std::size_t flat = f.product * static_cast<std::size_t>(s.horizon) + f.time_step;
    if (is_fixed[flat]) throw std::invalid_argument("cell fixed twice");
    is_fixed[flat] = 1;
    const DemandCurve curve = curve_for_cell(p, p.cells[f.time_step]);
    const double q = expected_demand(curve, f.price);
    fixed_demand += q;
    fixed_revenue += f.price * q;
  }

  std::vector<DemandCurve> unfixed;
  for (std::size_t i = 0; i < s.products.size(); ++i) {
    for (int t = 0; t <= start_time; ++t) {
      if (is_fixed[i * static_cast<std::size_t>(s.horizon) + t]) continue;
      DemandCurve c = curve_for_cell(s.products[i], s.products[i].cells[t]);
      if (c.alpha > 0.0) unfixed.push_back(c);
    }
  }

  if (unfixed.empty()) return fixed_revenue;
  const double residual = capacity - fixed_demand;
  if (residual <= 0.0) {
    throw InfeasibleError("fixed cells already exceed capacity: no feasible completion");
  }
  return fixed_revenue + dual_bound(unfixed, residual, 0.0).value;
}

}  // namespace rmtk
