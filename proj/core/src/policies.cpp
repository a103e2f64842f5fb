#include "rmtk/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rmtk/demand.hpp"

namespace rmtk {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile requires p in (0, 1)");
  }
  // Wichura, Algorithm AS 241 (PPND16).
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
              3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
            4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
            2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
            5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

double littlewood_protection(double p1, double p2, double mean, double std_dev) {
  if (!(p1 > 0.0) || !(p2 > 0.0)) throw std::invalid_argument("fares must be > 0");
  if (!(mean >= 0.0) || !(std_dev >= 0.0)) {
    throw std::invalid_argument("demand moments must be >= 0");
  }
  const double ratio = p2 / p1;
  if (ratio >= 1.0) return 0.0;
  if (std_dev == 0.0) return mean;  // point mass: P(D >= y) is 1 up to the mean
  return std::max(0.0, mean + std_dev * normal_quantile(1.0 - ratio));
}

std::vector<AdjustedClass> mr_transform(std::span<const FareClass> family_classes) {
  if (family_classes.empty()) return {};
  for (std::size_t k = 0; k < family_classes.size(); ++k) {
    const FareClass& c = family_classes[k];
    if (!(c.fare > 0.0)) throw std::invalid_argument("fares must be > 0");
    if (!(c.mean_demand >= 0.0)) throw std::invalid_argument("mean demand must be >= 0");
    if (c.family != family_classes.front().family) {
      throw std::invalid_argument("mr_transform takes classes of a single family");
    }
    if (k > 0 && !(c.fare < family_classes[k - 1].fare)) {
      throw std::invalid_argument("fares must be strictly decreasing within a family");
    }
  }

  std::vector<AdjustedClass> out;
  out.reserve(family_classes.size());
  double cum_demand = 0.0;
  // Q and TR of the last class that actually sells; zero-demand classes are
  // skipped so the marginal revenue measures real incremental sales.
  double q_prev_selling = 0.0;
  double tr_prev_selling = 0.0;
  double prev_adjusted_fare = family_classes.front().fare;
  for (std::size_t k = 0; k < family_classes.size(); ++k) {
    const FareClass& c = family_classes[k];
    AdjustedClass a;
    a.origin = c;
    a.adjusted_mean = c.mean_demand;
    a.adjusted_std = c.std_demand;
    cum_demand += c.mean_demand;
    a.cumulative_demand = cum_demand;
    // Everyone down to here buys at the lowest open fare.
    a.cumulative_revenue = c.fare * cum_demand;
    if (k == 0) {
      a.adjusted_fare = c.fare;  // MR_1 = f_1
      if (c.mean_demand > 0.0) {
        q_prev_selling = a.cumulative_demand;
        tr_prev_selling = a.cumulative_revenue;
      }
    } else if (c.mean_demand > 0.0) {
      a.adjusted_fare =
          (a.cumulative_revenue - tr_prev_selling) / (a.cumulative_demand - q_prev_selling);
      q_prev_selling = a.cumulative_demand;
      tr_prev_selling = a.cumulative_revenue;
    } else {
      a.adjusted_fare = prev_adjusted_fare;  // zero-width increment
    }
    prev_adjusted_fare = a.adjusted_fare;
    out.push_back(std::move(a));
  }
  return out;
}

NestedPolicy emsrb_nested(std::vector<AdjustedClass> pooled, double capacity) {
  if (pooled.empty()) throw std::invalid_argument("no classes to build a policy from");
  if (!(capacity >= 0.0)) throw std::invalid_argument("capacity must be >= 0");
  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const AdjustedClass& a, const AdjustedClass& b) {
                     return a.adjusted_fare > b.adjusted_fare;
                   });

  NestedPolicy policy;
  policy.ordered_classes = std::move(pooled);
  const std::size_t n = policy.ordered_classes.size();

  double prefix_mean = 0.0;
  double prefix_var = 0.0;
  double prefix_value = 0.0;  // sum of fare * mean
  policy.protections.reserve(n > 0 ? n - 1 : 0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const AdjustedClass& c = policy.ordered_classes[j];
    prefix_mean += c.adjusted_mean;
    prefix_var += c.adjusted_std * c.adjusted_std;
    prefix_value += c.adjusted_fare * c.adjusted_mean;
    double y = 0.0;
    if (prefix_mean > 0.0) {
      const double weighted_fare = prefix_value / prefix_mean;
      const double next_fare = policy.ordered_classes[j + 1].adjusted_fare;
      if (weighted_fare > 0.0) {
        // A non-positive adjusted fare below the prefix sells at a loss, so
        // the whole cabin is protected from it.
        y = next_fare > 0.0 ? littlewood_protection(weighted_fare, next_fare,
                                                    prefix_mean, std::sqrt(prefix_var))
                            : capacity;
      }
    }
    policy.protections.push_back(y);
  }
  // Nesting: protections may not decrease along the order; clamp into the cabin.
  double running = 0.0;
  for (double& y : policy.protections) {
    running = std::max(running, y);
    y = std::min(running, capacity);
  }

  policy.booking_limits.reserve(n);
  policy.booking_limits.push_back(capacity);
  for (std::size_t j = 1; j < n; ++j) {
    policy.booking_limits.push_back(std::max(0.0, capacity - policy.protections[j - 1]));
  }
  return policy;
}

NestedPolicy emsrb_policy(std::span<const FareClass> classes, double capacity) {
  std::vector<AdjustedClass> identity;
  identity.reserve(classes.size());
  for (const FareClass& c : classes) {
    AdjustedClass a;
    a.origin = c;
    a.adjusted_fare = c.fare;
    a.adjusted_mean = c.mean_demand;
    a.adjusted_std = c.std_demand;
    a.cumulative_demand = c.mean_demand;
    a.cumulative_revenue = c.fare * c.mean_demand;
    identity.push_back(std::move(a));
  }
  return emsrb_nested(std::move(identity), capacity);
}

StepPolicy step_policy_from_nested(const NestedPolicy& nested,
                                   std::span<const std::string> family_ids) {
  StepPolicy step;
  step.entries.reserve(nested.ordered_classes.size());
  for (std::size_t j = 0; j < nested.ordered_classes.size(); ++j) {
    const AdjustedClass& c = nested.ordered_classes[j];
    const auto it = std::find(family_ids.begin(), family_ids.end(), c.origin.family);
    if (it == family_ids.end()) {
      throw std::invalid_argument("policy class references unknown family '" +
                                  c.origin.family + "'");
    }
    FareAvailability fa;
    fa.family = static_cast<int>(it - family_ids.begin());
    fa.family_id = c.origin.family;
    fa.fare = c.origin.fare;
    fa.limit = nested.booking_limits[j];
    step.entries.push_back(std::move(fa));
  }
  std::sort(step.entries.begin(), step.entries.end(),
            [](const FareAvailability& a, const FareAvailability& b) {
              if (a.family != b.family) return a.family < b.family;
              return a.fare < b.fare;
            });
  return step;
}

std::vector<FareClass> demand_to_come_classes(const Scenario& s, int family, int t) {
  const Product& p = s.products[family];
  const std::size_t m = p.price_ladder.size();
  std::vector<double> means(m, 0.0);
  // Aggregate the remaining steps t, t-1, ..., 0 (selling order).
  for (int step = t; step >= 0; --step) {
    const DemandCell& cell = p.cells[step];
    if (cell.mean_demand_at_min <= 0.0) continue;
    double tail_here = 1.0;  // survival at the current fare, starting at p_min
    for (std::size_t k = 0; k < m; ++k) {
      const double tail_next =
          k + 1 < m ? survival_probability(cell.frat5, p.min_price(), p.price_ladder[k + 1])
                    : 0.0;
      means[k] += cell.mean_demand_at_min * (tail_here - tail_next);
      tail_here = tail_next;
    }
  }
  std::vector<FareClass> classes;
  classes.reserve(m);
  for (std::size_t k = m; k-- > 0;) {  // fare-descending for mr_transform
    FareClass c;
    c.family = p.id;
    c.fare = p.price_ladder[k];
    c.mean_demand = means[k];
    c.std_demand = std::sqrt(means[k]);  // Poisson-thinned slice
    classes.push_back(std::move(c));
  }
  return classes;
}

namespace {

AvailabilityPolicy build_policy(const Scenario& s, double capacity, int as_of_time,
                                bool marginal_transform) {
  if (as_of_time < 0 || as_of_time >= s.horizon) {
    throw std::invalid_argument("as_of_time outside [0, horizon)");
  }
  std::vector<std::string> family_ids;
  family_ids.reserve(s.products.size());
  for (const Product& p : s.products) family_ids.push_back(p.id);

  AvailabilityPolicy policy;
  policy.horizon = s.horizon;
  policy.as_of_time = as_of_time;
  policy.steps.resize(s.horizon);
  for (int t = as_of_time; t >= 0; --t) {
    std::vector<AdjustedClass> pooled;
    for (std::size_t i = 0; i < s.products.size(); ++i) {
      const auto classes = demand_to_come_classes(s, static_cast<int>(i), t);
      if (marginal_transform) {
        for (AdjustedClass& a : mr_transform(classes)) {
          if (a.adjusted_fare > 0.0) pooled.push_back(std::move(a));
        }
      } else {
        for (const FareClass& c : classes) {
          AdjustedClass a;
          a.origin = c;
          a.adjusted_fare = c.fare;
          a.adjusted_mean = c.mean_demand;
          a.adjusted_std = c.std_demand;
          a.cumulative_demand = c.mean_demand;
          a.cumulative_revenue = c.fare * c.mean_demand;
          pooled.push_back(std::move(a));
        }
      }
    }
    if (pooled.empty()) continue;  // every class uneconomical: step stays closed
    const NestedPolicy nested = emsrb_nested(std::move(pooled), capacity);
    policy.steps[t] = step_policy_from_nested(nested, family_ids);
  }
  return policy;
}

}  // namespace

AvailabilityPolicy mrt_emsrb_policy(const Scenario& s, double capacity, int as_of_time) {
  return build_policy(s, capacity, as_of_time, true);
}

AvailabilityPolicy classic_emsrb_policy(const Scenario& s, double capacity, int as_of_time) {
  return build_policy(s, capacity, as_of_time, false);
}

}  // namespace rmtk
