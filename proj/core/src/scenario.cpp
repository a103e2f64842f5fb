#include "rmtk/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rmtk/rng.hpp"

namespace rmtk {

std::string describe(const std::vector<Violation>& violations) {
  std::ostringstream out;
  out << violations.size() << " invariant violation(s):";
  for (const auto& v : violations) {
    out << "\n  " << v.path << ": " << v.rule;
  }
  return out.str();
}

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  if (s.capacity < 1) out.push_back({"capacity", "capacity >= 1"});
  if (s.horizon < 1) out.push_back({"horizon", "horizon >= 1"});
  if (s.products.empty()) out.push_back({"products", "at least 1 product"});

  std::set<std::string> seen_ids;
  for (std::size_t i = 0; i < s.products.size(); ++i) {
    const Product& p = s.products[i];
    const std::string base = "products[" + std::to_string(i) + "]";
    if (!seen_ids.insert(p.id).second) {
      out.push_back({base + ".id", "product identifiers unique"});
    }
    if (p.price_ladder.empty()) {
      out.push_back({base + ".prices", "price ladder non-empty"});
    } else {
      for (std::size_t k = 0; k < p.price_ladder.size(); ++k) {
        if (!(p.price_ladder[k] > 0.0)) {
          out.push_back({base + ".prices[" + std::to_string(k) + "]", "price > 0"});
        }
        if (k > 0 && !(p.price_ladder[k] > p.price_ladder[k - 1])) {
          out.push_back({base + ".prices[" + std::to_string(k) + "]",
                         "price ladder strictly increasing"});
        }
      }
    }
    if (s.horizon >= 1 && p.cells.size() != static_cast<std::size_t>(s.horizon)) {
      out.push_back({base + ".cells", "cells has exactly horizon entries"});
    }
    for (std::size_t t = 0; t < p.cells.size(); ++t) {
      const DemandCell& c = p.cells[t];
      if (!(c.mean_demand_at_min >= 0.0) || std::isnan(c.mean_demand_at_min)) {
        out.push_back({base + ".demand[" + std::to_string(t) + "]", "mean demand >= 0"});
      }
      if (!(c.frat5 > 1.0)) {
        out.push_back({base + ".frat5[" + std::to_string(t) + "]", "frat5 > 1"});
      }
    }
  }
  return out;
}

namespace {

using ordered_json = nlohmann::ordered_json;

Scenario scenario_from_json(const ordered_json& doc) {
  Scenario s;
  try {
    s.capacity = doc.at("capacity").get<int>();
    s.horizon = doc.at("horizon").get<int>();
    for (const auto& jp : doc.at("products")) {
      Product p;
      p.id = jp.at("id").get<std::string>();
      p.price_ladder = jp.at("prices").get<std::vector<double>>();
      const auto demand = jp.at("demand").get<std::vector<double>>();
      const auto frat5 = jp.at("frat5").get<std::vector<double>>();
      if (demand.size() != frat5.size()) {
        throw ParseError("product '" + p.id + "': demand and frat5 arrays differ in length");
      }
      p.cells.reserve(demand.size());
      for (std::size_t t = 0; t < demand.size(); ++t) {
        p.cells.push_back({demand[t], frat5[t]});
      }
      s.products.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed scenario document: ") + e.what());
  }
  return s;
}

}  // namespace

Scenario load_scenario(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed scenario document: ") + e.what());
  }
  Scenario s = scenario_from_json(doc);
  auto violations = validate_scenario(s);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  ordered_json doc;
  doc["capacity"] = s.capacity;
  doc["horizon"] = s.horizon;
  doc["products"] = ordered_json::array();
  for (const Product& p : s.products) {
    ordered_json jp;
    jp["id"] = p.id;
    jp["prices"] = p.price_ladder;
    std::vector<double> demand, frat5;
    demand.reserve(p.cells.size());
    frat5.reserve(p.cells.size());
    for (const DemandCell& c : p.cells) {
      demand.push_back(c.mean_demand_at_min);
      frat5.push_back(c.frat5);
    }
    jp["demand"] = demand;
    jp["frat5"] = frat5;
    doc["products"].push_back(std::move(jp));
  }
  return doc.dump(2) + "\n";
}

bool scenario_equal(const Scenario& a, const Scenario& b) {
  if (a.capacity != b.capacity || a.horizon != b.horizon ||
      a.products.size() != b.products.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.products.size(); ++i) {
    const Product& pa = a.products[i];
    const Product& pb = b.products[i];
    if (pa.id != pb.id || pa.price_ladder != pb.price_ladder ||
        pa.cells.size() != pb.cells.size()) {
      return false;
    }
    for (std::size_t t = 0; t < pa.cells.size(); ++t) {
      if (pa.cells[t].mean_demand_at_min != pb.cells[t].mean_demand_at_min ||
          pa.cells[t].frat5 != pb.cells[t].frat5) {
        return false;
      }
    }
  }
  return true;
}

GeneratorSpec GeneratorSpec::tiered(int n_products, int horizon, int capacity,
                                    double price_min, double price_max,
                                    int ladder_min, int ladder_max,
                                    double q_min, double q_max,
                                    double frat5_min, double frat5_max) {
  GeneratorSpec spec;
  spec.horizon = horizon;
  spec.capacity = capacity;
  spec.q_min = q_min;
  spec.q_max = q_max;
  spec.frat5_min = frat5_min;
  spec.frat5_max = frat5_max;
  if (n_products < 1) throw std::invalid_argument("n_products must be >= 1");
  if (!(price_min > 0.0) || !(price_max >= price_min)) {
    throw std::invalid_argument("price range must satisfy 0 < min <= max");
  }
  const double ratio = price_max / price_min;
  for (int i = 0; i < n_products; ++i) {
    // Band i covers [min*r^(i/n), min*r^((i+1)/n)]; product 0 is the premium
    // tier so generated scenarios list expensive products first, like fare
    // data usually does.
    const int band = n_products - 1 - i;
    ProductRange pr;
    pr.ladder_min = ladder_min;
    pr.ladder_max = ladder_max;
    pr.price_min = std::floor(price_min * std::pow(ratio, double(band) / n_products));
    pr.price_max = std::floor(price_min * std::pow(ratio, double(band + 1) / n_products));
    spec.products.push_back(pr);
  }
  return spec;
}

namespace {

void check_generator_spec(const GeneratorSpec& spec) {
  if (spec.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (spec.capacity < 1) throw std::invalid_argument("capacity must be >= 1");
  if (spec.products.empty()) throw std::invalid_argument("at least one product range required");
  if (!(spec.q_min >= 0.0) || !(spec.q_max >= spec.q_min)) {
    throw std::invalid_argument("Q range must satisfy 0 <= min <= max");
  }
  if (!(spec.frat5_min > 1.0) || !(spec.frat5_max >= spec.frat5_min)) {
    throw std::invalid_argument("FRAT5 range must satisfy 1 < min <= max");
  }
  for (const ProductRange& pr : spec.products) {
    if (pr.ladder_min < 1 || pr.ladder_max < pr.ladder_min) {
      throw std::invalid_argument("ladder size range must satisfy 1 <= min <= max");
    }
    if (!(pr.price_min >= 1.0) || !(pr.price_max >= pr.price_min)) {
      throw std::invalid_argument("price range must satisfy 1 <= min <= max");
    }
    const long span = static_cast<long>(std::floor(pr.price_max)) -
                      static_cast<long>(std::floor(pr.price_min)) + 1;
    if (span < pr.ladder_max) {
      throw std::invalid_argument("price range too narrow for the requested ladder size");
    }
    if (pr.q_min >= 0.0 && !(pr.q_max >= pr.q_min)) {
      throw std::invalid_argument("per-product Q range must satisfy 0 <= min <= max");
    }
    if (pr.frat5_min > 0.0 && !(pr.frat5_min > 1.0 && pr.frat5_max >= pr.frat5_min)) {
      throw std::invalid_argument("per-product FRAT5 range must satisfy 1 < min <= max");
    }
  }
}

// Passing the same Rng twice reproduces the single-stream layout.
Scenario generate_with(const GeneratorSpec& spec, Rng& ladder_rng, Rng& demand_rng) {
  Scenario s;
  s.capacity = spec.capacity;
  s.horizon = spec.horizon;
  for (std::size_t i = 0; i < spec.products.size(); ++i) {
    const ProductRange& pr = spec.products[i];
    Product p;
    p.id = "P" + std::to_string(i + 1);

    const int size =
        pr.ladder_min +
        static_cast<int>(ladder_rng.below(std::uint64_t(pr.ladder_max - pr.ladder_min + 1)));
    const long lo = static_cast<long>(std::floor(pr.price_min));
    const long hi = static_cast<long>(std::floor(pr.price_max));
    // The band minimum is always on the ladder; the rest are distinct whole
    // prices above it.
    std::set<long> prices{lo};
    while (prices.size() < static_cast<std::size_t>(size)) {
      prices.insert(lo + static_cast<long>(ladder_rng.below(std::uint64_t(hi - lo + 1))));
    }
    p.price_ladder.assign(prices.begin(), prices.end());

    const double q_lo = pr.q_min >= 0.0 ? pr.q_min : spec.q_min;
    const double q_hi = pr.q_min >= 0.0 ? pr.q_max : spec.q_max;
    const double f_lo = pr.frat5_min > 0.0 ? pr.frat5_min : spec.frat5_min;
    const double f_hi = pr.frat5_min > 0.0 ? pr.frat5_max : spec.frat5_max;
    p.cells.resize(spec.horizon);
    for (DemandCell& c : p.cells) {
      c.mean_demand_at_min = q_lo + (q_hi - q_lo) * demand_rng.uniform01();
    }
    for (DemandCell& c : p.cells) {
      c.frat5 = f_lo + (f_hi - f_lo) * demand_rng.uniform01();
    }
    s.products.push_back(std::move(p));
  }
  return s;
}

}  // namespace

Scenario generate_synthetic(const GeneratorSpec& spec, std::uint64_t seed) {
  check_generator_spec(spec);
  Rng rng(seed);
  return generate_with(spec, rng, rng);
}

Scenario generate_synthetic(const GeneratorSpec& spec, std::uint64_t structure_seed,
                            std::uint64_t demand_seed) {
  check_generator_spec(spec);
  Rng ladder_rng(derive_seed(structure_seed, 0x17adde5ULL));
  Rng demand_rng(derive_seed(demand_seed, 0xde3a4dULL));
  return generate_with(spec, ladder_rng, demand_rng);
}

DemandSummary min_price_demand_summary(const Scenario& s) {
  DemandSummary out;
  for (const Product& p : s.products) {
    double sum = 0.0;
    for (const DemandCell& c : p.cells) sum += c.mean_demand_at_min;
    out.per_product.push_back(sum);
    out.total += sum;
  }
  return out;
}

}  // namespace rmtk
