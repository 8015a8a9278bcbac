#include "wptsim/eh_model.hpp"

#include <cmath>
#include <stdexcept>

namespace wpt {

EhParams EhParams::create(double q_max_mw, double a_per_mw, double b_mw) {
  if (!(q_max_mw > 0.0) || !std::isfinite(q_max_mw) ||
      !(a_per_mw > 0.0) || !std::isfinite(a_per_mw) ||
      !(b_mw > 0.0) || !std::isfinite(b_mw)) {
    throw std::invalid_argument("EhParams: q_max, a, b must be finite and > 0");
  }
  EhParams p;
  p.q_max_mw = q_max_mw;
  p.a_per_mw = a_per_mw;
  p.b_mw = b_mw;
  p.omega = 1.0 / (1.0 + std::exp(a_per_mw * b_mw));
  return p;
}

EhParams EhParams::defaults() { return create(10.73, 0.2308, 5.365); }

namespace {

void check_input(double q_rf_mw) {
  if (std::isnan(q_rf_mw) || q_rf_mw < 0.0) {
    throw std::domain_error("dc_power: RF input must be >= 0 mW");
  }
}

// Logistic factor 1/(1+e^{-a(q-b)}). At q == 0 the exponent is the same
// floating-point expression a*b used for omega, so dc_power(p, 0) cancels to
// exactly zero.
double sigmoid(const EhParams& p, double q_rf_mw) {
  return 1.0 / (1.0 + std::exp(-p.a_per_mw * (q_rf_mw - p.b_mw)));
}

}  // namespace

double dc_power(const EhParams& p, double q_rf_mw) {
  check_input(q_rf_mw);
  const double s = sigmoid(p, q_rf_mw);
  return p.q_max_mw * (s - p.omega) / (1.0 - p.omega);
}

double dc_power_derivative(const EhParams& p, double q_rf_mw) {
  check_input(q_rf_mw);
  // a q_max e^{-a(q-b)} / (1+e^{-a(q-b)})^2 / (1-omega), written via the
  // sigmoid s(1-s) so it underflows to 0 instead of inf/inf at the tails.
  const double s = sigmoid(p, q_rf_mw);
  return p.a_per_mw * p.q_max_mw * s * (1.0 - s) / (1.0 - p.omega);
}

double inflection_point(const EhParams& p) { return p.b_mw; }

}  // namespace wpt
