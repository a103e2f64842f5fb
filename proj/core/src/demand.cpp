#include "rmtk/demand.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rmtk {

namespace {
constexpr double kLn2 = std::numbers::ln2;

void check_cell_params(double frat5, double min_price) {
  if (!(frat5 > 1.0)) throw std::invalid_argument("frat5 must be > 1");
  if (!(min_price > 0.0)) throw std::invalid_argument("min_price must be > 0");
}
}  // namespace

DemandCurve curve_from_frat5(double q_min, double frat5, double min_price) {
  check_cell_params(frat5, min_price);
  if (!(q_min >= 0.0)) throw std::invalid_argument("mean demand must be >= 0");
  DemandCurve c;
  c.beta = kLn2 / ((frat5 - 1.0) * min_price);
  c.alpha = q_min == 0.0 ? 0.0 : q_min * std::exp(kLn2 / (frat5 - 1.0));
  return c;
}

double expected_demand(const DemandCurve& c, double price) {
  if (price < 0.0) throw std::invalid_argument("price must be >= 0");
  if (c.alpha == 0.0) return 0.0;
  return c.alpha * std::exp(-c.beta * price);
}

double expected_revenue(const DemandCurve& c, double price) {
  return price * expected_demand(c, price);
}

double survival_probability(double frat5, double min_price, double p) {
  check_cell_params(frat5, min_price);
  if (p <= min_price) return 1.0;
  return std::exp(-kLn2 / (frat5 - 1.0) * (p / min_price - 1.0));
}

WtpDistribution wtp_distribution(double frat5, double min_price) {
  check_cell_params(frat5, min_price);
  return {min_price, min_price * (frat5 - 1.0) / kLn2};
}

double WtpDistribution::tail(double p) const {
  if (p <= min_price) return 1.0;
  return std::exp(-(p - min_price) / scale);
}

DemandCurve curve_for_cell(const Product& p, const DemandCell& cell) {
  return curve_from_frat5(cell.mean_demand_at_min, cell.frat5, p.min_price());
}

}  // namespace rmtk
