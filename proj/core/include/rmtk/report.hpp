#pragma once

#include <span>
#include <string>
#include <vector>

#include "rmtk/discrete.hpp"
#include "rmtk/policies.hpp"
#include "rmtk/relaxed.hpp"
#include "rmtk/scenario.hpp"
#include "rmtk/simulate.hpp"

namespace rmtk {

enum class OutputFormat { table, csv };

OutputFormat parse_format(const std::string& name);

// Fixed-point rendering used across every report: currency and seat counts
// carry two decimals, so identical inputs always produce identical bytes.
std::string format_fixed(double x, int decimals = 2);
std::string format_sci(double x);

// Simple column-aligned table / CSV emitter with a stable column order.
class TableBuilder {
 public:
  explicit TableBuilder(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  std::string render(OutputFormat format) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct ComparisonRow {
  std::string scenario;
  std::string policy;
  double mean_revenue = 0.0;
  double std_revenue = 0.0;
  double mean_seats = 0.0;
  double std_seats = 0.0;
  double bound = 0.0;
  double bound_ratio = 0.0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
};

struct RobustnessRow {
  std::string estimated;
  std::string actual;
  std::string policy;
  double potential_revenue = 0.0;  // correct estimation of the actual scenario
  double achieved_revenue = 0.0;   // policy from the estimate, actual arrivals
  double potential_seats = 0.0;
  double achieved_seats = 0.0;
};

struct RobustnessReport {
  std::vector<RobustnessRow> rows;
};

std::string emit_report(const ComparisonReport& report, OutputFormat format);
std::string emit_report(const RobustnessReport& report, OutputFormat format);

// Continuous price table in selling order plus the bound and KKT residuals.
std::string emit_relaxed_solution(const Scenario& s, const DualSolution& sol,
                                  double capacity, OutputFormat format);

// Price plan in selling order with the recomputed stats footer.
std::string emit_plan(const Scenario& s, const PricingPlan& plan, const PlanStats& stats,
                      OutputFormat format);

// Per-step policy audit: one row per (t, family, fare) with its booking limit.
std::string emit_policy(const Scenario& s, const AvailabilityPolicy& policy,
                        OutputFormat format);

// Per-replication per-step sales ledger. Offers are packed into one field as
// family=fare or family=fare@limit entries joined by '|'.
std::string emit_ledger_csv(std::span<const SimulationOutcome> outcomes);

}  // namespace rmtk
