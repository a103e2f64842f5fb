#pragma once

#include "rmtk/scenario.hpp"

namespace rmtk {

// Exponential demand curve q(p) = alpha * exp(-beta * p).
//
// Built from a (Q, FRAT5, min price) cell so that q(min_price) = Q and
// q(frat5 * min_price) = Q / 2. A cell with Q = 0 yields alpha = 0 and the
// curve is identically zero; beta stays positive in all cases.
struct DemandCurve {
  double alpha = 0.0;
  double beta = 1.0;

  // Price maximizing p * q(p); only meaningful when alpha > 0.
  double revenue_peak() const { return 1.0 / beta; }
};

// Willingness-to-pay distribution of one cell's passengers: min_price plus an
// exponential tail with the given scale, support [min_price, +inf).
struct WtpDistribution {
  double min_price = 0.0;
  double scale = 1.0;

  // P(WTP >= p); clamps to 1 below min_price.
  double tail(double p) const;
};

// Throws std::invalid_argument unless frat5 > 1, min_price > 0, q_min >= 0.
DemandCurve curve_from_frat5(double q_min, double frat5, double min_price);

// alpha * exp(-beta * p); price must be >= 0.
double expected_demand(const DemandCurve& c, double price);

// price * expected_demand; unique maximizer at 1/beta when alpha > 0.
double expected_revenue(const DemandCurve& c, double price);

// Probability that a min-price buyer still buys at price p, computed straight
// from the FRAT5 form (an independent route from expected_demand / Q).
// Clamps to 1 for p < min_price.
double survival_probability(double frat5, double min_price, double p);

// Scale = min_price * (frat5 - 1) / ln 2; tail matches survival_probability.
WtpDistribution wtp_distribution(double frat5, double min_price);

DemandCurve curve_for_cell(const Product& p, const DemandCell& cell);

}  // namespace rmtk
