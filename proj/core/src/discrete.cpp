#include "rmtk/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>

#include "rmtk/errors.hpp"

namespace rmtk {

namespace {
// Feasibility slack for expected-demand sums.
constexpr double kFeasEps = 1e-9;
}  // namespace

std::vector<double> prune_dominated_prices(std::span<const double> ladder,
                                           const DemandCurve& curve) {
  if (ladder.empty()) throw std::invalid_argument("empty price ladder");
  // Revenue rises up to 1/beta then falls, so the only candidate dominating
  // p is the next ladder price above it. Near-ties count as dominated, which
  // settles equal-revenue pairs toward the higher (capacity-freeing) price.
  std::vector<double> kept;
  kept.reserve(ladder.size());
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    if (k + 1 < ladder.size()) {
      const double rev = expected_revenue(curve, ladder[k]);
      const double rev_next = expected_revenue(curve, ladder[k + 1]);
      if (rev_next >= rev * (1.0 - 1e-12)) continue;  // dominated
    }
    kept.push_back(ladder[k]);
  }
  return kept;
}

double residual_min_demand(std::span<const PricedCell> cells) {
  double sum = 0.0;
  for (const PricedCell& c : cells) sum += expected_demand(c.curve, c.max_price);
  return sum;
}

SearchContext build_search_context(const Scenario& s) {
  SearchContext ctx;
  ctx.n_products = static_cast<int>(s.products.size());
  ctx.horizon = s.horizon;
  ctx.ladder_max.reserve(s.products.size());
  for (const Product& p : s.products) ctx.ladder_max.push_back(p.price_ladder.back());

  ctx.cells.reserve(static_cast<std::size_t>(ctx.n_products) * ctx.horizon);
  for (int t = s.horizon - 1; t >= 0; --t) {  // selling order
    for (int i = 0; i < ctx.n_products; ++i) {
      const Product& p = s.products[i];
      SearchCell cell;
      cell.product = i;
      cell.time_step = t;
      cell.curve = curve_for_cell(p, p.cells[t]);
      cell.prices = prune_dominated_prices(p.price_ladder, cell.curve);
      cell.demands.reserve(cell.prices.size());
      cell.revenues.reserve(cell.prices.size());
      for (double price : cell.prices) {
        const double q = expected_demand(cell.curve, price);
        cell.demands.push_back(q);
        cell.revenues.push_back(price * q);
      }
      cell.min_demand = expected_demand(cell.curve, p.price_ladder.back());
      ctx.cells.push_back(std::move(cell));
    }
  }

  const std::size_t n = ctx.cells.size();
  ctx.curve_at.assign(n + 1, 0);
  ctx.suffix_min.assign(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    ctx.suffix_min[k] = ctx.suffix_min[k + 1] + ctx.cells[k].min_demand;
  }
  // curves[] holds only alpha > 0 cells; curve_at[k] is where suffix k starts.
  for (const SearchCell& cell : ctx.cells) {
    if (cell.curve.alpha > 0.0) ctx.curves.push_back(cell.curve);
  }
  std::size_t pos = 0;
  for (std::size_t k = 0; k < n; ++k) {
    ctx.curve_at[k] = pos;
    if (ctx.cells[k].curve.alpha > 0.0) ++pos;
  }
  ctx.curve_at[n] = pos;
  return ctx;
}

namespace {

std::span<const DemandCurve> suffix_curves(const SearchContext& ctx, std::size_t k) {
  return {ctx.curves.data() + ctx.curve_at[k], ctx.curves.size() - ctx.curve_at[k]};
}

std::size_t first_cell_index(const SearchContext& ctx, int start_time) {
  return static_cast<std::size_t>(ctx.horizon - 1 - start_time) * ctx.n_products;
}

PricingPlan all_max_plan(const SearchContext& ctx, int start_time, bool feasible) {
  PricingPlan plan;
  plan.start_time = start_time;
  plan.feasible = feasible;
  plan.prices.assign(ctx.n_products, std::vector<double>(ctx.horizon, 0.0));
  for (int i = 0; i < ctx.n_products; ++i) {
    std::fill(plan.prices[i].begin(), plan.prices[i].end(), ctx.ladder_max[i]);
  }
  for (std::size_t k = first_cell_index(ctx, start_time); k < ctx.cells.size(); ++k) {
    const SearchCell& cell = ctx.cells[k];
    plan.expected_demand += cell.min_demand;
    plan.expected_revenue += cell.min_demand * ctx.ladder_max[cell.product];
  }
  return plan;
}

struct Child {
  int price_idx;
  double demand;
  double revenue;
  double bound;  // total: fixed revenue + own revenue + dual tail
  double mu;     // dual multiplier of the tail solve (warm start for children)
};

// Candidate children of one node, sorted best bound first, ties toward the
// higher price. min_required is the monotone-prices floor (or 0).
std::vector<Child> expand_children(const SearchContext& ctx, std::size_t k,
                                   double capacity, double fixed_demand,
                                   double fixed_revenue, double min_required,
                                   double warm_mu) {
  const SearchCell& cell = ctx.cells[k];
  std::vector<Child> children;
  children.reserve(cell.prices.size());
  const auto tail = suffix_curves(ctx, k + 1);
  const double tail_min = ctx.suffix_min[k + 1];
  double warm = warm_mu;
  for (std::size_t idx = 0; idx < cell.prices.size(); ++idx) {
    if (cell.prices[idx] < min_required) continue;
    const double d = cell.demands[idx];
    if (fixed_demand + d + tail_min > capacity + kFeasEps) continue;
    Child child{static_cast<int>(idx), d, cell.revenues[idx], 0.0, 0.0};
    if (tail.empty()) {
      child.bound = fixed_revenue + child.revenue;
    } else {
      const double residual = capacity - fixed_demand - d;
      if (residual <= 0.0) continue;
      const DualBoundResult r = dual_bound(tail, residual, warm);
      warm = r.mu;
      child.mu = r.mu;
      child.bound = fixed_revenue + child.revenue + r.value;
    }
    children.push_back(child);
  }
  std::sort(children.begin(), children.end(), [&](const Child& a, const Child& b) {
    if (a.bound != b.bound) return a.bound > b.bound;
    return cell.prices[a.price_idx] > cell.prices[b.price_idx];
  });
  return children;
}

PricingPlan plan_from_choices(const SearchContext& ctx, int start_time,
                              std::span<const int> choice_idx, double demand,
                              double revenue) {
  PricingPlan plan = all_max_plan(ctx, start_time, true);
  plan.expected_demand = demand;
  plan.expected_revenue = revenue;
  const std::size_t offset = first_cell_index(ctx, start_time);
  for (std::size_t d = 0; d < choice_idx.size(); ++d) {
    const SearchCell& cell = ctx.cells[offset + d];
    plan.prices[cell.product][cell.time_step] = cell.prices[choice_idx[d]];
  }
  return plan;
}

void check_start_time(const SearchContext& ctx, int start_time) {
  if (start_time < 0 || start_time >= ctx.horizon) {
    throw std::invalid_argument("start_time outside [0, horizon)");
  }
}

// Monotone floor: the price already chosen for (product, t+1), if that cell
// lies inside the active range.
double monotone_floor(const SearchContext& ctx, std::size_t offset, std::size_t k,
                      std::span<const int> choice_idx) {
  if (k < offset + ctx.n_products) return 0.0;  // first active step for this product
  const std::size_t prev = k - ctx.n_products;
  return ctx.cells[prev].prices[choice_idx[prev - offset]];
}

}  // namespace

PricingPlan greedy_optimize(const SearchContext& ctx, double capacity, int start_time,
                            const SearchConfig& config) {
  check_start_time(ctx, start_time);
  if (capacity < 0.0) throw std::invalid_argument("capacity must be >= 0");
  const std::size_t offset = first_cell_index(ctx, start_time);
  const std::size_t n_active = ctx.cells.size() - offset;

  if (ctx.suffix_min[offset] > capacity + kFeasEps) {
    return all_max_plan(ctx, start_time, false);
  }

  struct Frame {
    std::vector<Child> children;
    std::size_t next = 0;
  };
  std::vector<Frame> frames;
  std::vector<int> choice_idx(n_active, -1);
  std::vector<double> running_demand(n_active + 1, 0.0);
  std::vector<double> running_revenue(n_active + 1, 0.0);
  frames.reserve(n_active);
  double warm_mu = 0.0;

  frames.push_back({expand_children(ctx, offset, capacity, 0.0, 0.0,
                                    config.monotone_prices
                                        ? monotone_floor(ctx, offset, offset, choice_idx)
                                        : 0.0,
                                    warm_mu)});

  while (true) {
    Frame& frame = frames.back();
    const std::size_t depth = frames.size() - 1;
    if (frame.next >= frame.children.size()) {
      // Dead end: undo this level and move the parent to its next-best child.
      frames.pop_back();
      if (frames.empty()) {
        // Cannot happen while the all-max completion is feasible, but return
        // the flagged fallback rather than looping.
        return all_max_plan(ctx, start_time, false);
      }
      ++frames.back().next;
      continue;
    }
    const Child& pick = frame.children[frame.next];
    choice_idx[depth] = pick.price_idx;
    running_demand[depth + 1] = running_demand[depth] + pick.demand;
    running_revenue[depth + 1] = running_revenue[depth] + pick.revenue;
    if (depth + 1 == n_active) {
      return plan_from_choices(ctx, start_time, choice_idx, running_demand[n_active],
                               running_revenue[n_active]);
    }
    const std::size_t k = offset + depth + 1;
    frames.push_back({expand_children(
        ctx, k, capacity, running_demand[depth + 1], running_revenue[depth + 1],
        config.monotone_prices ? monotone_floor(ctx, offset, k, choice_idx) : 0.0,
        pick.mu)});
  }
}

PricingPlan greedy_optimize(const Scenario& s, double capacity, int start_time,
                            const SearchConfig& config) {
  return greedy_optimize(build_search_context(s), capacity, start_time, config);
}

PricingPlan exact_optimize(const SearchContext& ctx, double capacity,
                           const SearchConfig& config) {
  const int start_time = ctx.horizon - 1;
  const std::size_t offset = 0;
  const std::size_t n_active = ctx.cells.size();
  if (capacity < 0.0) throw std::invalid_argument("capacity must be >= 0");

  // Admissibility: the pruned search tree must fit the configured budget.
  double tree_size = 1.0;
  for (const SearchCell& cell : ctx.cells) {
    tree_size *= static_cast<double>(cell.prices.size());
    if (tree_size > static_cast<double>(config.exact_size_limit)) {
      throw NumericalError("instance too large for the exact search budget");
    }
  }

  if (ctx.suffix_min[offset] > capacity + kFeasEps) {
    return all_max_plan(ctx, start_time, false);
  }

  struct Node {
    double bound;
    long seq;
    double demand;
    double revenue;
    double mu;
    std::vector<int> choices;
  };
  struct Worse {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound < b.bound;
      return a.seq > b.seq;  // FIFO among equal bounds
    }
  };
  std::priority_queue<Node, std::vector<Node>, Worse> open;

  long seq = 0;
  long nodes = 0;
  const auto root_tail = suffix_curves(ctx, offset);
  double root_bound;
  if (root_tail.empty()) {
    root_bound = 0.0;
  } else {
    root_bound = dual_bound(root_tail, capacity, 0.0).value;
  }
  open.push({root_bound, seq++, 0.0, 0.0, 0.0, {}});

  bool have_incumbent = false;
  double best_value = 0.0;
  double best_demand = 0.0;
  std::vector<int> best_choices;

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (have_incumbent && node.bound <= best_value + config.bound_tolerance) break;
    const std::size_t k = offset + node.choices.size();
    const double floor =
        config.monotone_prices ? monotone_floor(ctx, offset, k, node.choices) : 0.0;
    auto children = expand_children(ctx, k, capacity, node.demand, node.revenue, floor,
                                    node.mu);
    for (const Child& child : children) {
      if (++nodes > config.exact_size_limit) {
        throw NumericalError("exact search exceeded its node budget");
      }
      if (node.choices.size() + 1 == n_active) {
        const double value = node.revenue + child.revenue;
        if (!have_incumbent || value > best_value) {
          have_incumbent = true;
          best_value = value;
          best_demand = node.demand + child.demand;
          best_choices = node.choices;
          best_choices.push_back(child.price_idx);
        }
        continue;
      }
      if (have_incumbent && child.bound <= best_value + config.bound_tolerance) continue;
      Node next{child.bound, seq++, node.demand + child.demand,
                node.revenue + child.revenue, child.mu, node.choices};
      next.choices.push_back(child.price_idx);
      open.push(std::move(next));
    }
  }

  if (!have_incumbent) {
    // Unreachable when the all-max completion is feasible; keep the honest
    // fallback anyway.
    return all_max_plan(ctx, start_time, false);
  }
  return plan_from_choices(ctx, start_time, best_choices, best_demand, best_value);
}

PricingPlan exact_optimize(const Scenario& s, double capacity, const SearchConfig& config) {
  return exact_optimize(build_search_context(s), capacity, config);
}

PlanStats plan_stats(const PricingPlan& plan, const Scenario& s, double capacity) {
  if (plan.prices.size() != s.products.size()) {
    throw std::invalid_argument("plan shape does not match scenario");
  }
  PlanStats stats;
  for (std::size_t i = 0; i < s.products.size(); ++i) {
    if (plan.prices[i].size() != static_cast<std::size_t>(s.horizon)) {
      throw std::invalid_argument("plan shape does not match scenario");
    }
    for (int t = 0; t <= plan.start_time; ++t) {
      const DemandCurve curve = curve_for_cell(s.products[i], s.products[i].cells[t]);
      const double q = expected_demand(curve, plan.prices[i][t]);
      stats.expected_demand += q;
      stats.expected_revenue += plan.prices[i][t] * q;
    }
  }
  double bound = 0.0;
  try {
    bound = relaxed_bound(s, capacity, {}, plan.start_time);
  } catch (const InfeasibleError&) {
    // No feasible completion at all (zero capacity); the ratio is moot.
  }
  stats.bound_ratio = bound > 0.0 ? stats.expected_revenue / bound : 1.0;
  return stats;
}

}  // namespace rmtk
