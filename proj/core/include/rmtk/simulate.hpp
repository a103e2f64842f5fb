#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rmtk/discrete.hpp"
#include "rmtk/policies.hpp"
#include "rmtk/scenario.hpp"

namespace rmtk {

// One passenger: which family they want, the most they will pay, and when
// they show up.
struct ArrivalEvent {
  int family = 0;  // product index into the scenario
  double wtp = 0.0;
  int time_step = 0;
};

// What was on offer for one family during one step. limit < 0 means a posted
// price with no per-fare allotment (fixed-price simulations).
struct LedgerOffer {
  int family = 0;
  std::string family_id;
  double fare = 0.0;
  double limit = -1.0;
};

struct StepLedger {
  int t = 0;
  int arrivals = 0;
  int sales = 0;
  double revenue = 0.0;
  std::vector<LedgerOffer> offers;
};

struct SimulationOutcome {
  double revenue = 0.0;
  int seats_sold = 0;
  std::vector<StepLedger> ledger;  // selling order: first entry is the first step on sale
  std::uint64_t seed = 0;
};

// Poisson(Q) arrivals per family, each with wtp = min price plus an
// exponential tail, interleaved in uniformly random order. Family f draws
// from derive_seed(step_seed, f); the shuffle from
// derive_seed(step_seed, kShuffleTag). Deterministic given step_seed.
std::vector<ArrivalEvent> sample_arrivals(const Scenario& s, int t,
                                          std::uint64_t step_seed);

// Runs a nested-availability policy against stochastic arrivals. Per step the
// policy's allotments are loaded (floored to whole seats); each passenger
// takes the cheapest open fare of their family at or below their wtp; a sale
// decrements that fare's allotment and the remaining capacity; sales stop at
// zero capacity.
SimulationOutcome simulate_policy(const Scenario& s, const AvailabilityPolicy& policy,
                                  int capacity, std::uint64_t seed);

// Same execution against a caller-supplied arrival list (events grouped by
// step in selling order). Deterministic; used for worked-example checks.
SimulationOutcome simulate_policy_arrivals(std::span<const ArrivalEvent> arrivals,
                                           const AvailabilityPolicy& policy,
                                           int capacity);

// Posts the plan's price per (family, step); a passenger buys at the posted
// price iff it does not exceed their wtp and seats remain.
SimulationOutcome simulate_fixed_prices(const Scenario& s, const PricingPlan& plan,
                                        int capacity, std::uint64_t seed);

// The rolling-horizon loop: at each step, re-run the greedy on the estimated
// scenario over the remaining steps with the remaining capacity, post that
// step's prices, then sell against arrivals drawn from the actual scenario.
// estimated == actual is the nominal experiment; differing scenarios measure
// robustness to mis-estimation.
SimulationOutcome simulate_greedy_rolling(const Scenario& estimated,
                                          const Scenario& actual, int capacity,
                                          std::uint64_t seed,
                                          const SearchConfig& config = {});

struct MonteCarloStats {
  double mean_revenue = 0.0;
  double std_revenue = 0.0;
  double mean_seats = 0.0;
  double std_seats = 0.0;
  std::vector<SimulationOutcome> outcomes;
  bool single_replication = false;  // std reported as 0 by convention
};

// Replication i runs with seed derive_seed(master_seed, i); statistics use
// the n-1 denominator. Identical master seeds reproduce every outcome.
MonteCarloStats monte_carlo(const std::function<SimulationOutcome(std::uint64_t, int)>& run,
                            int n, std::uint64_t master_seed);

}  // namespace rmtk
