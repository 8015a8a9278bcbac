#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace wpt {

/// Channel matrix for one scenario realization. Row k holds h_k^H, so the RF
/// power delivered to ER k by covariance S is row_k * S * row_k^H (in watts
/// when S carries watts); rf_unit_scale converts that to mW for the EH curve.
struct ChannelSet {
  Eigen::MatrixXcd entries;  ///< K x M, row k = h_k^H
  double rf_unit_scale;      ///< watts*gain -> mW at the EH input

  static ChannelSet create(Eigen::MatrixXcd entries, double rf_unit_scale);

  int num_ers() const { return static_cast<int>(entries.rows()); }
  int num_antennas() const { return static_cast<int>(entries.cols()); }
};

/// RF power in mW at ER k (0-based) under covariance matrix S (watts).
/// Asserts the quadratic form is real to tolerance before discarding the
/// imaginary part.
double rf_power_mw(const ChannelSet& channels, int k, const Eigen::MatrixXcd& S);

/// Rician/ULA channel model constants.
struct ChannelModelParams {
  double rician_factor;         ///< linear LOS/NLOS power ratio
  double distance_m;            ///< ET-to-ER distance
  double ref_gain;              ///< channel power gain at 1 m, linear
  double pathloss_exp;          ///< distance-law exponent
  double tx_gain_dbi;           ///< transmit antenna gain
  double rx_gain_dbi;           ///< receive antenna gain
  double element_spacing_ratio; ///< array spacing over wavelength
  int num_ers;                  ///< K
  int num_antennas;             ///< M

  static ChannelModelParams create(double rician_factor, double distance_m,
                                   double ref_gain, double pathloss_exp,
                                   double tx_gain_dbi, double rx_gain_dbi,
                                   double element_spacing_ratio, int num_ers,
                                   int num_antennas);

  /// Simulation defaults: K_R = 5 dB, d = 4 m, -30 dB reference gain,
  /// exponent 3, 10 / 2.8 dBi antenna gains, half-wavelength spacing,
  /// K = 30 ERs, M = 4 antennas.
  static ChannelModelParams defaults();
};

/// Average per-entry channel power gain g, antenna gains included.
double average_power_gain(const ChannelModelParams& model);

/// LOS steering row sqrt(g)*[1, e^{i theta_k}, ..., e^{i(M-1) theta_k}] for
/// ER k (1-based), theta_k = -2 pi (kappa/lambda) sin(phi_k) and ER bearings
/// phi_k = -(5/12) pi + (2/K) pi (k-1). Throws std::out_of_range on bad k.
Eigen::VectorXcd los_row(const ChannelModelParams& model, int er_index);

/// Rician mixture sqrt(KR/(1+KR))*LOS + sqrt(1/(1+KR))*NLOS with i.i.d.
/// CN(0, g) scattered entries. Deterministic given the seed; each ER row has
/// its own derived substream so rows are independent of K's storage order.
ChannelSet sample_channels(const ChannelModelParams& model, std::uint64_t seed);

/// The fixed two-ER, four-antenna scenario with orthogonal channels
/// h_1^H = [1e-2, 1e-2, 0, 0], h_2^H = [0, 0, 1e-2, 1e-2] (power gains of
/// 1e-4 per entry) and mW output scale.
ChannelSet example1_channels();

/// CSV round-trip (columns er_index, antenna_index, re, im) for replay.
void save_channels_csv(const ChannelSet& channels, const std::string& path);
ChannelSet load_channels_csv(const std::string& path, double rf_unit_scale);

}  // namespace wpt
