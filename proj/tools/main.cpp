// rmtk command line front end: scenario generation, the relaxed and discrete
// solvers, seat-protection policies and Monte Carlo experiments.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rmtk/demand.hpp"
#include "rmtk/discrete.hpp"
#include "rmtk/errors.hpp"
#include "rmtk/experiment.hpp"
#include "rmtk/policies.hpp"
#include "rmtk/relaxed.hpp"
#include "rmtk/report.hpp"
#include "rmtk/scenario.hpp"
#include "rmtk/simulate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitInfeasible = 3;

struct CommonOpts {
  std::string scenario_path;
  std::string actual_path;
  int capacity = -1;
  int replications = 100;
  std::uint64_t seed = 1;
  std::string policy = "greedy";
  bool monotone = false;
  std::string out_path;
  std::string format = "table";
  std::string ledger_path;
};

void add_output_flags(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--out", opts.out_path, "Write the report to this path instead of stdout");
  cmd->add_option("--format", opts.format, "Output format: table or csv")
      ->check(CLI::IsMember({"table", "csv"}));
}

void write_output(const CommonOpts& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write to " + opts.out_path);
  out << text;
}

std::vector<rmtk::PolicyKind> parse_policies(const std::string& list) {
  std::vector<rmtk::PolicyKind> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(rmtk::parse_policy(item));
  }
  if (out.empty()) throw std::invalid_argument("no policy given");
  return out;
}

rmtk::ExperimentConfig experiment_config(const CommonOpts& opts) {
  rmtk::ExperimentConfig cfg;
  cfg.capacity = opts.capacity;
  cfg.replications = opts.replications;
  cfg.master_seed = opts.seed;
  cfg.search.monotone_prices = opts.monotone;
  return cfg;
}

std::string scenario_label(const std::string& path) {
  const auto slash = path.find_last_of('/');
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name.resize(dot);
  return name;
}

int run(int argc, char** argv) {
  CLI::App app{"Single-leg revenue management toolkit"};
  app.require_subcommand(1);
  CommonOpts opts;

  // generate
  auto* generate = app.add_subcommand("generate", "Synthesize a scenario file");
  int gen_products = 3, gen_horizon = 30, gen_capacity = 180;
  int gen_ladder_min = 5, gen_ladder_max = 8;
  double gen_price_min = 150, gen_price_max = 900;
  double gen_q_min = 0.0, gen_q_max = 6.0, gen_f_min = 1.5, gen_f_max = 2.5;
  generate->add_option("--products", gen_products, "Number of products");
  generate->add_option("--horizon", gen_horizon, "Number of time steps");
  generate->add_option("--capacity", gen_capacity, "Seats");
  generate->add_option("--ladder-min", gen_ladder_min, "Smallest ladder size");
  generate->add_option("--ladder-max", gen_ladder_max, "Largest ladder size");
  generate->add_option("--price-min", gen_price_min, "Lowest fare overall");
  generate->add_option("--price-max", gen_price_max, "Highest fare overall");
  generate->add_option("--q-min", gen_q_min, "Per-cell mean demand lower bound");
  generate->add_option("--q-max", gen_q_max, "Per-cell mean demand upper bound");
  generate->add_option("--frat5-min", gen_f_min, "Per-cell FRAT5 lower bound");
  generate->add_option("--frat5-max", gen_f_max, "Per-cell FRAT5 upper bound");
  generate->add_option("--seed", opts.seed, "Generator seed");
  std::uint64_t gen_demand_seed = 0;
  auto* demand_seed_opt = generate->add_option(
      "--demand-seed", gen_demand_seed,
      "Redraw only the demand cells: same --seed value keeps the ladders, so two "
      "files with different demand seeds form an estimated/actual pair");
  generate->add_option("--out", opts.out_path, "Scenario file to write")->required();

  // solve-relaxed
  auto* solve_relaxed = app.add_subcommand(
      "solve-relaxed", "Continuous price relaxation: optimal prices and upper bound");
  solve_relaxed->add_option("--scenario", opts.scenario_path)->required();
  solve_relaxed->add_option("--capacity", opts.capacity, "Capacity override");
  add_output_flags(solve_relaxed, opts);

  // optimize-greedy / optimize-exact
  auto* optimize_greedy =
      app.add_subcommand("optimize-greedy", "Bound-guided greedy price plan");
  auto* optimize_exact =
      app.add_subcommand("optimize-exact", "Exact branch-and-bound price plan");
  for (auto* cmd : {optimize_greedy, optimize_exact}) {
    cmd->add_option("--scenario", opts.scenario_path)->required();
    cmd->add_option("--capacity", opts.capacity, "Capacity override");
    cmd->add_flag("--monotone", opts.monotone,
                  "Restrict to prices non-decreasing toward departure");
    add_output_flags(cmd, opts);
  }

  // policy-emsrb / policy-mrt-emsrb
  auto* policy_emsrb =
      app.add_subcommand("policy-emsrb", "Classic EMSRb booking limits per step");
  auto* policy_mrt = app.add_subcommand(
      "policy-mrt-emsrb", "EMSRb on marginal-revenue-transformed classes");
  for (auto* cmd : {policy_emsrb, policy_mrt}) {
    cmd->add_option("--scenario", opts.scenario_path)->required();
    cmd->add_option("--capacity", opts.capacity, "Capacity override");
    add_output_flags(cmd, opts);
  }

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of one policy");
  simulate->add_option("--scenario", opts.scenario_path)->required();
  simulate->add_option("--actual", opts.actual_path,
                       "Draw arrivals from this scenario instead (mis-estimation)");
  simulate->add_option("--policy", opts.policy, "greedy|exact|emsrb|mrt-emsrb");
  simulate->add_option("--capacity", opts.capacity, "Capacity override");
  simulate->add_option("--replications", opts.replications, "Replication count");
  simulate->add_option("--seed", opts.seed, "Master seed");
  simulate->add_flag("--monotone", opts.monotone);
  simulate->add_option("--ledger", opts.ledger_path, "Write the per-step sales ledger CSV");
  add_output_flags(simulate, opts);

  // compare
  auto* compare = app.add_subcommand(
      "compare", "Monte Carlo comparison of policies under common random numbers");
  compare->add_option("--scenario", opts.scenario_path)->required();
  compare->add_option("--policy", opts.policy, "Comma-separated policy list");
  compare->add_option("--capacity", opts.capacity, "Capacity override");
  compare->add_option("--replications", opts.replications, "Replication count");
  compare->add_option("--seed", opts.seed, "Master seed");
  compare->add_flag("--monotone", opts.monotone);
  add_output_flags(compare, opts);

  // robustness
  auto* robustness = app.add_subcommand(
      "robustness", "Potential vs achieved revenue under a mis-estimated scenario");
  robustness->add_option("--scenario", opts.scenario_path, "Estimated scenario")->required();
  robustness->add_option("--actual", opts.actual_path, "Actual scenario")->required();
  robustness->add_option("--policy", opts.policy, "Comma-separated policy list");
  robustness->add_option("--capacity", opts.capacity, "Capacity override");
  robustness->add_option("--replications", opts.replications, "Replication count");
  robustness->add_option("--seed", opts.seed, "Master seed");
  robustness->add_flag("--monotone", opts.monotone);
  add_output_flags(robustness, opts);

  CLI11_PARSE(app, argc, argv);
  const rmtk::OutputFormat format = rmtk::parse_format(opts.format);

  if (generate->parsed()) {
    const auto spec = rmtk::GeneratorSpec::tiered(
        gen_products, gen_horizon, gen_capacity, gen_price_min, gen_price_max,
        gen_ladder_min, gen_ladder_max, gen_q_min, gen_q_max, gen_f_min, gen_f_max);
    const rmtk::Scenario s =
        demand_seed_opt->count() > 0
            ? rmtk::generate_synthetic(spec, opts.seed, gen_demand_seed)
            : rmtk::generate_synthetic(spec, opts.seed);
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write to " + opts.out_path);
    out << rmtk::serialize_scenario(s);
    const auto summary = rmtk::min_price_demand_summary(s);
    std::cout << "wrote " << opts.out_path << '\n';
    for (std::size_t i = 0; i < s.products.size(); ++i) {
      std::cout << s.products[i].id << " min-price demand "
                << rmtk::format_fixed(summary.per_product[i]) << '\n';
    }
    std::cout << "total min-price demand " << rmtk::format_fixed(summary.total)
              << " for capacity " << s.capacity << '\n';
    return kExitOk;
  }

  const rmtk::Scenario scenario = rmtk::load_scenario_file(opts.scenario_path);
  const rmtk::ExperimentConfig cfg = experiment_config(opts);
  const int capacity = rmtk::effective_capacity(scenario, cfg);

  if (solve_relaxed->parsed()) {
    std::vector<rmtk::DemandCurve> curves;
    for (int t = scenario.horizon - 1; t >= 0; --t) {  // selling order
      for (const rmtk::Product& p : scenario.products) {
        curves.push_back(rmtk::curve_for_cell(p, p.cells[t]));
      }
    }
    rmtk::DualSolution sol = rmtk::solve_dual(curves, capacity);
    // Zero-demand cells have no finite revenue-maximizing price; report the
    // ladder maximum by convention.
    std::size_t k = 0;
    for (int t = scenario.horizon - 1; t >= 0; --t) {
      for (const rmtk::Product& p : scenario.products) {
        if (p.cells[t].mean_demand_at_min == 0.0) {
          sol.prices[k] = p.price_ladder.back();
        }
        ++k;
      }
    }
    write_output(opts, rmtk::emit_relaxed_solution(scenario, sol, capacity, format));
    return kExitOk;
  }

  if (optimize_greedy->parsed() || optimize_exact->parsed()) {
    const rmtk::PricingPlan plan =
        optimize_greedy->parsed()
            ? rmtk::greedy_optimize(scenario, capacity, scenario.horizon - 1, cfg.search)
            : rmtk::exact_optimize(scenario, capacity, cfg.search);
    const rmtk::PlanStats stats = rmtk::plan_stats(plan, scenario, capacity);
    write_output(opts, rmtk::emit_plan(scenario, plan, stats, format));
    return plan.feasible ? kExitOk : kExitInfeasible;
  }

  if (policy_emsrb->parsed() || policy_mrt->parsed()) {
    const rmtk::AvailabilityPolicy policy =
        policy_emsrb->parsed()
            ? rmtk::classic_emsrb_policy(scenario, capacity, scenario.horizon - 1)
            : rmtk::mrt_emsrb_policy(scenario, capacity, scenario.horizon - 1);
    write_output(opts, rmtk::emit_policy(scenario, policy, format));
    return kExitOk;
  }

  if (simulate->parsed()) {
    const rmtk::PolicyKind kind = rmtk::parse_policy(opts.policy);
    const rmtk::Scenario actual =
        opts.actual_path.empty() ? scenario : rmtk::load_scenario_file(opts.actual_path);
    const rmtk::MonteCarloStats mc = rmtk::run_policy_mc(scenario, actual, kind, cfg);
    rmtk::ComparisonReport report;
    const double bound = rmtk::relaxed_bound(scenario, capacity);
    report.rows.push_back({scenario_label(opts.scenario_path), rmtk::policy_name(kind),
                           mc.mean_revenue, mc.std_revenue, mc.mean_seats, mc.std_seats,
                           bound, bound > 0.0 ? mc.mean_revenue / bound : 1.0});
    write_output(opts, rmtk::emit_report(report, format));
    if (!opts.ledger_path.empty()) {
      std::ofstream ledger(opts.ledger_path, std::ios::binary);
      if (!ledger) throw std::invalid_argument("cannot write to " + opts.ledger_path);
      ledger << rmtk::emit_ledger_csv(mc.outcomes);
    }
    return kExitOk;
  }

  if (compare->parsed()) {
    const auto policies = parse_policies(opts.policy);
    const auto report = rmtk::run_compare(scenario, scenario_label(opts.scenario_path),
                                          policies, cfg);
    write_output(opts, rmtk::emit_report(report, format));
    return kExitOk;
  }

  if (robustness->parsed()) {
    const auto policies = parse_policies(opts.policy);
    const rmtk::Scenario actual = rmtk::load_scenario_file(opts.actual_path);
    const auto report = rmtk::run_robustness(
        scenario, scenario_label(opts.scenario_path), actual,
        scenario_label(opts.actual_path), policies, cfg);
    write_output(opts, rmtk::emit_report(report, format));
    return kExitOk;
  }

  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const rmtk::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const rmtk::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const rmtk::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const rmtk::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
