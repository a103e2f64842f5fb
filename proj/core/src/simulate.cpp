#include "rmtk/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rmtk/demand.hpp"
#include "rmtk/errors.hpp"
#include "rmtk/rng.hpp"

namespace rmtk {

std::vector<ArrivalEvent> sample_arrivals(const Scenario& s, int t,
                                          std::uint64_t step_seed) {
  if (t < 0 || t >= s.horizon) throw std::invalid_argument("time step outside horizon");
  std::vector<ArrivalEvent> events;
  for (std::size_t i = 0; i < s.products.size(); ++i) {
    const Product& p = s.products[i];
    const DemandCell& cell = p.cells[t];
    Rng rng(derive_seed(step_seed, i));
    const long count = rng.poisson(cell.mean_demand_at_min);
    if (count == 0) continue;
    const WtpDistribution wtp = wtp_distribution(cell.frat5, p.min_price());
    for (long k = 0; k < count; ++k) {
      events.push_back({static_cast<int>(i), wtp.min_price + rng.exponential(wtp.scale), t});
    }
  }
  // Uniform interleaving across families.
  Rng shuffle_rng(derive_seed(step_seed, kShuffleTag));
  for (std::size_t j = events.size(); j > 1; --j) {
    std::swap(events[j - 1], events[shuffle_rng.below(j)]);
  }
  return events;
}

namespace {

// Mutable per-step availability: allotments floored to whole seats.
struct OpenFares {
  // (fare, remaining seats) per family, fares ascending.
  std::vector<std::vector<std::pair<double, double>>> by_family;

  void load(const StepPolicy& step, std::size_t n_families) {
    by_family.assign(n_families, {});
    for (const FareAvailability& fa : step.entries) {
      if (fa.family < 0 || static_cast<std::size_t>(fa.family) >= n_families) {
        throw std::invalid_argument("policy references a family outside the scenario");
      }
      by_family[fa.family].emplace_back(fa.fare, std::floor(fa.limit));
    }
  }

  // Cheapest open fare of the family at or below wtp, or a negative price.
  double take(int family, double wtp) {
    for (auto& [fare, left] : by_family[family]) {
      if (left >= 1.0) {
        if (fare <= wtp) {
          left -= 1.0;
          return fare;
        }
        return -1.0;  // cheapest open fare already above the budget
      }
    }
    return -1.0;
  }
};

std::vector<LedgerOffer> snapshot_offers(const StepPolicy& step,
                                         std::span<const std::string> family_ids) {
  std::vector<LedgerOffer> offers;
  offers.reserve(step.entries.size());
  for (const FareAvailability& fa : step.entries) {
    LedgerOffer o;
    o.family = fa.family;
    o.family_id = fa.family >= 0 && static_cast<std::size_t>(fa.family) < family_ids.size()
                      ? family_ids[fa.family]
                      : fa.family_id;
    o.fare = fa.fare;
    o.limit = std::floor(fa.limit);
    offers.push_back(std::move(o));
  }
  return offers;
}

std::vector<std::string> product_ids(const Scenario& s) {
  std::vector<std::string> ids;
  ids.reserve(s.products.size());
  for (const Product& p : s.products) ids.push_back(p.id);
  return ids;
}

SimulationOutcome run_policy(const Scenario* scenario_for_arrivals,
                             std::span<const ArrivalEvent> fixed_arrivals,
                             const AvailabilityPolicy& policy, int capacity,
                             std::uint64_t seed, std::size_t n_families,
                             std::span<const std::string> family_ids) {
  if (policy.horizon < 1 || policy.steps.size() != static_cast<std::size_t>(policy.horizon)) {
    throw std::invalid_argument("policy does not cover the horizon");
  }
  SimulationOutcome out;
  out.seed = seed;
  int capacity_left = capacity;
  OpenFares open;
  std::size_t cursor = 0;  // into fixed_arrivals, grouped by step in selling order

  for (int t = policy.as_of_time; t >= 0; --t) {
    const StepPolicy& step = policy.steps[t];
    open.load(step, n_families);

    std::vector<ArrivalEvent> sampled;
    std::span<const ArrivalEvent> events;
    if (scenario_for_arrivals != nullptr) {
      sampled = sample_arrivals(*scenario_for_arrivals, t, derive_seed(seed, t));
      events = sampled;
    } else {
      const std::size_t begin = cursor;
      while (cursor < fixed_arrivals.size() && fixed_arrivals[cursor].time_step == t) {
        ++cursor;
      }
      events = fixed_arrivals.subspan(begin, cursor - begin);
    }

    StepLedger row;
    row.t = t;
    row.arrivals = static_cast<int>(events.size());
    row.offers = snapshot_offers(step, family_ids);
    for (const ArrivalEvent& ev : events) {
      if (capacity_left <= 0) break;
      if (ev.family < 0 || static_cast<std::size_t>(ev.family) >= n_families) {
        throw std::invalid_argument("arrival references a family outside the policy");
      }
      const double fare = open.take(ev.family, ev.wtp);
      if (fare >= 0.0) {
        --capacity_left;
        ++row.sales;
        row.revenue += fare;
      }
    }
    out.revenue += row.revenue;
    out.seats_sold += row.sales;
    out.ledger.push_back(std::move(row));
  }
  return out;
}

}  // namespace

SimulationOutcome simulate_policy(const Scenario& s, const AvailabilityPolicy& policy,
                                  int capacity, std::uint64_t seed) {
  const auto ids = product_ids(s);
  return run_policy(&s, {}, policy, capacity, seed, s.products.size(), ids);
}

SimulationOutcome simulate_policy_arrivals(std::span<const ArrivalEvent> arrivals,
                                           const AvailabilityPolicy& policy,
                                           int capacity) {
  std::size_t n_families = 0;
  for (const ArrivalEvent& ev : arrivals) {
    n_families = std::max(n_families, static_cast<std::size_t>(ev.family) + 1);
  }
  for (const StepPolicy& step : policy.steps) {
    for (const FareAvailability& fa : step.entries) {
      n_families = std::max(n_families, static_cast<std::size_t>(fa.family) + 1);
    }
  }
  for (std::size_t k = 1; k < arrivals.size(); ++k) {
    if (arrivals[k].time_step > arrivals[k - 1].time_step) {
      throw std::invalid_argument("arrival list must be grouped by step in selling order");
    }
  }
  return run_policy(nullptr, arrivals, policy, capacity, 0, n_families, {});
}

SimulationOutcome simulate_fixed_prices(const Scenario& s, const PricingPlan& plan,
                                        int capacity, std::uint64_t seed) {
  if (plan.prices.size() != s.products.size()) {
    throw std::invalid_argument("plan shape does not match scenario");
  }
  for (const auto& row : plan.prices) {
    if (row.size() != static_cast<std::size_t>(s.horizon)) {
      throw std::invalid_argument("plan shape does not match scenario");
    }
  }
  const auto ids = product_ids(s);
  SimulationOutcome out;
  out.seed = seed;
  int capacity_left = capacity;
  for (int t = plan.start_time; t >= 0; --t) {
    const auto events = sample_arrivals(s, t, derive_seed(seed, t));
    StepLedger row;
    row.t = t;
    row.arrivals = static_cast<int>(events.size());
    for (std::size_t i = 0; i < s.products.size(); ++i) {
      row.offers.push_back({static_cast<int>(i), ids[i], plan.prices[i][t], -1.0});
    }
    for (const ArrivalEvent& ev : events) {
      if (capacity_left <= 0) break;
      const double price = plan.prices[ev.family][t];
      if (ev.wtp >= price) {
        --capacity_left;
        ++row.sales;
        row.revenue += price;
      }
    }
    out.revenue += row.revenue;
    out.seats_sold += row.sales;
    out.ledger.push_back(std::move(row));
  }
  return out;
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

SimulationOutcome simulate_greedy_rolling(const Scenario& estimated,
                                          const Scenario& actual, int capacity,
                                          std::uint64_t seed,
                                          const SearchConfig& config) {
  check_same_shape(estimated, actual);
  const SearchContext ctx = build_search_context(estimated);
  const auto ids = product_ids(actual);

  SimulationOutcome out;
  out.seed = seed;
  int capacity_left = capacity;
  for (int t = actual.horizon - 1; t >= 0; --t) {
    // Remaining-horizon solve at the current remaining capacity; only step
    // t's prices are posted. Once the plane is full the ladder maxima are
    // posted by convention (no sales can happen anyway).
    std::vector<double> posted(actual.products.size());
    if (capacity_left > 0) {
      const PricingPlan plan = greedy_optimize(ctx, capacity_left, t, config);
      for (std::size_t i = 0; i < posted.size(); ++i) posted[i] = plan.prices[i][t];
    } else {
      for (std::size_t i = 0; i < posted.size(); ++i) posted[i] = ctx.ladder_max[i];
    }

    const auto events = sample_arrivals(actual, t, derive_seed(seed, t));
    StepLedger row;
    row.t = t;
    row.arrivals = static_cast<int>(events.size());
    for (std::size_t i = 0; i < posted.size(); ++i) {
      row.offers.push_back({static_cast<int>(i), ids[i], posted[i], -1.0});
    }
    for (const ArrivalEvent& ev : events) {
      if (capacity_left <= 0) break;
      if (ev.wtp >= posted[ev.family]) {
        --capacity_left;
        ++row.sales;
        row.revenue += posted[ev.family];
      }
    }
    out.revenue += row.revenue;
    out.seats_sold += row.sales;
    out.ledger.push_back(std::move(row));
  }
  return out;
}

MonteCarloStats monte_carlo(const std::function<SimulationOutcome(std::uint64_t, int)>& run,
                            int n, std::uint64_t master_seed) {
  if (n < 1) throw std::invalid_argument("replication count must be >= 1");
  MonteCarloStats stats;
  stats.outcomes.reserve(n);
  for (int i = 0; i < n; ++i) {
    stats.outcomes.push_back(run(derive_seed(master_seed, static_cast<std::uint64_t>(i)), i));
  }
  double sum_rev = 0.0, sum_seats = 0.0;
  for (const SimulationOutcome& o : stats.outcomes) {
    sum_rev += o.revenue;
    sum_seats += o.seats_sold;
  }
  stats.mean_revenue = sum_rev / n;
  stats.mean_seats = sum_seats / n;
  if (n == 1) {
    stats.single_replication = true;
  } else {
    double ss_rev = 0.0, ss_seats = 0.0;
    for (const SimulationOutcome& o : stats.outcomes) {
      ss_rev += (o.revenue - stats.mean_revenue) * (o.revenue - stats.mean_revenue);
      ss_seats += (o.seats_sold - stats.mean_seats) * (o.seats_sold - stats.mean_seats);
    }
    stats.std_revenue = std::sqrt(ss_rev / (n - 1));
    stats.std_seats = std::sqrt(ss_seats / (n - 1));
  }
  return stats;
}

}  // namespace rmtk
