#include "rmtk/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace rmtk {

OutputFormat parse_format(const std::string& name) {
  if (name == "table") return OutputFormat::table;
  if (name == "csv") return OutputFormat::csv;
  throw std::invalid_argument("unknown format '" + name + "' (expected table or csv)");
}

std::string format_fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
  std::string out = buf;
  // Normalize -0.00 to 0.00.
  if (out.size() > 1 && out[0] == '-' &&
      out.find_first_not_of("0.", 1) == std::string::npos) {
    out.erase(out.begin());
  }
  return out;
}

std::string format_sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

TableBuilder::TableBuilder(std::vector<std::string> header) : header_(std::move(header)) {}

void TableBuilder::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw std::invalid_argument("row width does not match header");
  }
  rows_.push_back(std::move(cells));
}

std::string TableBuilder::render(OutputFormat format) const {
  std::ostringstream out;
  if (format == OutputFormat::csv) {
    for (std::size_t c = 0; c < header_.size(); ++c) {
      out << (c ? "," : "") << header_[c];
    }
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        out << (c ? "," : "") << row[c];
      }
      out << '\n';
    }
    return out.str();
  }

  std::vector<std::size_t> width(header_.size());
  for (std::size_t c = 0; c < header_.size(); ++c) width[c] = header_[c].size();
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << "  ";
      // Right-align everything; headers and ids just pick up padding.
      out << std::string(width[c] - row[c].size(), ' ') << row[c];
    }
    out << '\n';
  };
  emit_row(header_);
  for (const auto& row : rows_) emit_row(row);
  return out.str();
}

std::string emit_report(const ComparisonReport& report, OutputFormat format) {
  TableBuilder table({"scenario", "policy", "mean_revenue", "std_revenue", "mean_seats",
                      "std_seats", "bound", "bound_ratio"});
  for (const ComparisonRow& r : report.rows) {
    table.add_row({r.scenario, r.policy, format_fixed(r.mean_revenue),
                   format_fixed(r.std_revenue), format_fixed(r.mean_seats),
                   format_fixed(r.std_seats), format_fixed(r.bound),
                   format_fixed(r.bound_ratio, 4)});
  }
  return table.render(format);
}

std::string emit_report(const RobustnessReport& report, OutputFormat format) {
  TableBuilder table({"estimated", "actual", "policy", "potential_revenue",
                      "achieved_revenue", "potential_seats", "achieved_seats"});
  for (const RobustnessRow& r : report.rows) {
    table.add_row({r.estimated, r.actual, r.policy, format_fixed(r.potential_revenue),
                   format_fixed(r.achieved_revenue), format_fixed(r.potential_seats),
                   format_fixed(r.achieved_seats)});
  }
  return table.render(format);
}

std::string emit_relaxed_solution(const Scenario& s, const DualSolution& sol,
                                  double capacity, OutputFormat format) {
  std::ostringstream out;
  out << "capacity " << format_fixed(capacity, 0) << '\n';
  out << "mu_star " << format_fixed(sol.mu_star, 6) << '\n';
  out << "bound " << format_fixed(sol.bound) << '\n';
  out << "iterations " << sol.newton_iterations << '\n';
  out << "kkt gradient=" << format_sci(sol.kkt.gradient_residual)
      << " slack=" << format_sci(sol.kkt.capacity_slack)
      << " comp_slack=" << format_sci(sol.kkt.complementary_slackness)
      << " gap=" << format_sci(sol.kkt.duality_gap) << '\n';

  std::vector<std::string> header{"t"};
  for (const Product& p : s.products) header.push_back(p.id);
  TableBuilder table(std::move(header));
  // Prices arrive cell-major in selling order: step t has one entry per product.
  for (int t = s.horizon - 1; t >= 0; --t) {
    std::vector<std::string> row{std::to_string(t)};
    const std::size_t base = static_cast<std::size_t>(s.horizon - 1 - t) * s.products.size();
    for (std::size_t i = 0; i < s.products.size(); ++i) {
      row.push_back(format_fixed(sol.prices[base + i]));
    }
    table.add_row(std::move(row));
  }
  out << table.render(format);
  return out.str();
}

std::string emit_plan(const Scenario& s, const PricingPlan& plan, const PlanStats& stats,
                      OutputFormat format) {
  std::ostringstream out;
  std::vector<std::string> header{"t"};
  for (const Product& p : s.products) header.push_back(p.id);
  TableBuilder table(std::move(header));
  for (int t = plan.start_time; t >= 0; --t) {
    std::vector<std::string> row{std::to_string(t)};
    for (std::size_t i = 0; i < s.products.size(); ++i) {
      row.push_back(format_fixed(plan.prices[i][t]));
    }
    table.add_row(std::move(row));
  }
  out << table.render(format);
  out << "expected_revenue " << format_fixed(stats.expected_revenue) << '\n';
  out << "expected_demand " << format_fixed(stats.expected_demand) << '\n';
  out << "bound_ratio " << format_fixed(stats.bound_ratio, 4) << '\n';
  out << "feasible " << (plan.feasible ? "yes" : "no") << '\n';
  return out.str();
}

std::string emit_policy(const Scenario& s, const AvailabilityPolicy& policy,
                        OutputFormat format) {
  TableBuilder table({"t", "family", "fare", "booking_limit"});
  for (int t = policy.as_of_time; t >= 0; --t) {
    for (const FareAvailability& fa : policy.steps[t].entries) {
      const std::string id = !fa.family_id.empty()
                                 ? fa.family_id
                                 : s.products[fa.family].id;
      table.add_row({std::to_string(t), id, format_fixed(fa.fare),
                     format_fixed(fa.limit)});
    }
  }
  return table.render(format);
}

std::string emit_ledger_csv(std::span<const SimulationOutcome> outcomes) {
  std::ostringstream out;
  out << "replication,t,arrivals,sales,revenue,offers\n";
  for (std::size_t rep = 0; rep < outcomes.size(); ++rep) {
    for (const StepLedger& row : outcomes[rep].ledger) {
      out << rep << ',' << row.t << ',' << row.arrivals << ',' << row.sales << ','
          << format_fixed(row.revenue) << ',';
      for (std::size_t k = 0; k < row.offers.size(); ++k) {
        const LedgerOffer& o = row.offers[k];
        if (k) out << '|';
        out << o.family_id << '=' << format_fixed(o.fare);
        if (o.limit >= 0.0) out << '@' << format_fixed(o.limit, 0);
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace rmtk
