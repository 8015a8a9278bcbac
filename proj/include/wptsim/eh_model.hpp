#pragma once

namespace wpt {

/// Constants of the sigmoid RF-to-DC conversion curve. All powers in mW.
struct EhParams {
  double q_max_mw;  ///< saturation DC output
  double a_per_mw;  ///< steepness of the sigmoid
  double b_mw;      ///< RF input at the curve center (inflection point)
  double omega;     ///< zero-input sigmoid offset 1/(1+e^{a b}), precomputed

  /// Validates the constants (all strictly positive, finite) and fills omega.
  static EhParams create(double q_max_mw, double a_per_mw, double b_mw);

  /// Rectifier defaults used throughout: 10.73 mW / 0.2308 per mW / 5.365 mW.
  static EhParams defaults();
};

/// Harvested DC power for RF input q_rf_mw >= 0. Exactly 0 at q_rf_mw == 0,
/// approaches q_max_mw as q_rf_mw grows. Throws std::domain_error on negative
/// or NaN input.
double dc_power(const EhParams& p, double q_rf_mw);

/// d(dc_power)/dq at q_rf_mw >= 0; strictly positive, peaks at b_mw.
double dc_power_derivative(const EhParams& p, double q_rf_mw);

/// RF input where the curve switches from convex to concave (== b_mw).
double inflection_point(const EhParams& p);

}  // namespace wpt
