#pragma once

#include <span>
#include <string>
#include <vector>

#include "rmtk/scenario.hpp"

namespace rmtk {

// Inverse standard normal CDF (Wichura's AS241, double precision).
// p must lie in (0, 1).
double normal_quantile(double p);

// One sellable fare of one family with Gaussian demand-to-come.
struct FareClass {
  std::string family;
  double fare = 0.0;         // > 0
  double mean_demand = 0.0;  // >= 0
  double std_demand = 0.0;   // >= 0
};

// A fare class after the marginal revenue transformation. adjusted_fare is
// the incremental revenue per incremental seat of opening this class under
// buy-down; it can drop to zero or below, which marks the class uneconomical.
struct AdjustedClass {
  FareClass origin;
  double adjusted_fare = 0.0;      // MR_k; MR_1 = f_1
  double adjusted_mean = 0.0;      // d'_k = Q_k - Q_{k-1}
  double adjusted_std = 0.0;
  double cumulative_demand = 0.0;  // Q_k
  double cumulative_revenue = 0.0; // TR_k = f_k * Q_k
};

// Fare classes ordered by (adjusted) fare descending with nested protections.
// protections[j] guards classes 0..j against class j+1 and below, so it has
// one entry fewer than ordered_classes; booking_limits has one entry per
// class, the top one equal to capacity.
struct NestedPolicy {
  std::vector<AdjustedClass> ordered_classes;
  std::vector<double> protections;     // non-decreasing, clamped to [0, capacity]
  std::vector<double> booking_limits;  // non-increasing
};

// Littlewood's two-class rule: seats to protect for the higher fare p1
// against p2 sales, with Gaussian high-fare demand. Deterministic demand
// (std = 0) protects the full mean whenever 0 < p2/p1 < 1.
double littlewood_protection(double p1, double p2, double mean, double std_dev);

// Marginal revenue transformation of one family's classes (fares strictly
// decreasing). Zero-demand classes are skipped in the MR computation and
// inherit the previous class's adjusted fare to keep the ordering stable.
std::vector<AdjustedClass> mr_transform(std::span<const FareClass> family_classes);

// EMSRb over already-adjusted classes: sort by adjusted fare descending,
// aggregate each prefix into one pseudo-class (means and variances add) and
// protect it against the next fare via Littlewood's rule.
NestedPolicy emsrb_nested(std::vector<AdjustedClass> pooled, double capacity);

// Classic EMSRb: classes taken as independent (identity adjustment).
NestedPolicy emsrb_policy(std::span<const FareClass> classes, double capacity);

// What a simulator consumes: per time step, the open fares of each family
// with their seat allotments. Families are product indexes into the scenario
// that produced the policy; fares absent from a step are closed.
struct FareAvailability {
  int family = 0;
  std::string family_id;
  double fare = 0.0;
  double limit = 0.0;
};

struct StepPolicy {
  std::vector<FareAvailability> entries;  // sorted by (family, fare)
};

struct AvailabilityPolicy {
  int horizon = 0;
  int as_of_time = 0;             // steps t > as_of_time are empty (in the past)
  std::vector<StepPolicy> steps;  // indexed by t
};

// Maps a nested policy's classes back to per-(family, fare) allotments.
StepPolicy step_policy_from_nested(const NestedPolicy& nested,
                                   std::span<const std::string> family_ids);

// Demand-to-come fare classes of one family at decision step t: each ladder
// fare takes the slice of aggregated future demand whose willingness to pay
// lands in [fare, next fare), the top fare taking the whole tail. Variances
// follow the Poisson view (variance = mean). Classes come out fare-descending,
// ready for mr_transform.
std::vector<FareClass> demand_to_come_classes(const Scenario& s, int family, int t);

// Full MRT-EMSRb pipeline per step: transform each family, drop classes with
// adjusted fare <= 0, pool, run EMSRb, map back to availabilities.
AvailabilityPolicy mrt_emsrb_policy(const Scenario& s, double capacity, int as_of_time);

// Same pipeline without the transformation (fares treated as independent).
AvailabilityPolicy classic_emsrb_policy(const Scenario& s, double capacity, int as_of_time);

}  // namespace rmtk
