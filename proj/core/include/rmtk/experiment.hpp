#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "rmtk/report.hpp"
#include "rmtk/scenario.hpp"
#include "rmtk/simulate.hpp"

namespace rmtk {

enum class PolicyKind { relaxed, greedy, exact, emsrb, mrt_emsrb };

PolicyKind parse_policy(const std::string& name);
std::string policy_name(PolicyKind kind);

struct ExperimentConfig {
  int capacity = -1;  // < 0: use the scenario's own capacity
  int replications = 100;
  std::uint64_t master_seed = 1;
  SearchConfig search;
};

int effective_capacity(const Scenario& s, const ExperimentConfig& cfg);

// Monte Carlo run of one policy: the plan/policy is built on `estimated`,
// arrivals are drawn from `actual`. PolicyKind::relaxed is not simulable and
// throws. Replication i draws every stream from derive_seed(master_seed, i),
// so different policies under the same master seed face identical arrivals
// (common random numbers).
MonteCarloStats run_policy_mc(const Scenario& estimated, const Scenario& actual,
                              PolicyKind kind, const ExperimentConfig& cfg);

// One row per policy, all sharing the master seed and the relaxed bound.
// The relaxed row is an expected-value row (std 0, ratio 1).
ComparisonReport run_compare(const Scenario& s, const std::string& scenario_name,
                             std::span<const PolicyKind> policies,
                             const ExperimentConfig& cfg);

// Per policy: potential revenue (built on and run against the actual
// scenario, i.e. a correct estimation) vs achieved revenue (built on the
// estimated scenario, run against the actual arrivals); one row per
// (estimated, actual, policy).
RobustnessReport run_robustness(const Scenario& estimated, const std::string& estimated_name,
                                const Scenario& actual, const std::string& actual_name,
                                std::span<const PolicyKind> policies,
                                const ExperimentConfig& cfg);

}  // namespace rmtk
