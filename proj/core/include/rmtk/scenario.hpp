#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmtk/errors.hpp"

namespace rmtk {

// One (product, time step) demand cell: the mean demand seen at the lowest
// fare and the FRAT5 price-sensitivity multiplier.
struct DemandCell {
  double mean_demand_at_min = 0.0;  // expected passengers at min_price, >= 0
  double frat5 = 2.0;               // > 1; the price multiple halving demand
};

struct Product {
  std::string id;
  std::vector<double> price_ladder;  // strictly increasing, all > 0
  std::vector<DemandCell> cells;     // exactly horizon entries, index t ascending

  // min_price is pinned to the first ladder entry.
  double min_price() const { return price_ladder.front(); }
};

// A single-leg sales problem: seats, a discrete time horizon and products.
//
// Cells are stored with t ascending 0..horizon-1, but selling runs in the
// opposite direction: t = horizon-1 is the first step on sale and t = 0 is
// departure. Loops that follow the selling order iterate t downwards.
struct Scenario {
  int capacity = 0;  // seats, >= 1
  int horizon = 0;   // time steps, >= 1
  std::vector<Product> products;
};

// Empty result means every invariant holds; violations are data, not errors.
std::vector<Violation> validate_scenario(const Scenario& s);

// Parse the JSON scenario document (see README for the schema). Throws
// ParseError on malformed documents and ValidationError listing every broken
// invariant otherwise.
Scenario load_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);

// Deterministic serialization; load_scenario(serialize_scenario(s)) == s
// field for field.
std::string serialize_scenario(const Scenario& s);

bool scenario_equal(const Scenario& a, const Scenario& b);

// Per-product price band for the synthetic generator. The demand ranges are
// optional overrides of the generator-wide ones (negative / zero inherits).
struct ProductRange {
  int ladder_min = 5;
  int ladder_max = 8;
  double price_min = 150.0;  // becomes the product's lowest fare exactly
  double price_max = 900.0;
  double q_min = -1.0;
  double q_max = -1.0;
  double frat5_min = 0.0;
  double frat5_max = 0.0;
};

struct GeneratorSpec {
  int horizon = 30;
  int capacity = 180;
  std::vector<ProductRange> products;
  double q_min = 0.0;      // per-cell mean demand range at min price
  double q_max = 6.0;
  double frat5_min = 1.5;  // per-cell FRAT5 range
  double frat5_max = 2.5;

  // Splits [price_min, price_max] into n geometric bands, one product per
  // band, mimicking cabin tiers with distinct fare ranges.
  static GeneratorSpec tiered(int n_products, int horizon, int capacity,
                              double price_min, double price_max,
                              int ladder_min, int ladder_max,
                              double q_min, double q_max,
                              double frat5_min, double frat5_max);
};

// Pure function of (spec, seed): same inputs give byte-identical scenarios.
// Ladder prices are whole currency units; the band minimum is always the
// lowest fare. Throws std::invalid_argument on empty or inverted ranges.
Scenario generate_synthetic(const GeneratorSpec& spec, std::uint64_t seed);

// Split-seed variant: ladders come from structure_seed, demand cells from
// demand_seed. Two scenarios generated with the same structure_seed share
// products and ladders exactly, so they form a valid estimated/actual pair
// for robustness experiments.
Scenario generate_synthetic(const GeneratorSpec& spec, std::uint64_t structure_seed,
                            std::uint64_t demand_seed);

// Total expected demand at minimum prices, per product and overall; the
// demand-rich vs demand-poor classification input.
struct DemandSummary {
  std::vector<double> per_product;
  double total = 0.0;
};
DemandSummary min_price_demand_summary(const Scenario& s);

}  // namespace rmtk
