#include "wptsim/channel.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "rng.hpp"

namespace wpt {

ChannelSet ChannelSet::create(Eigen::MatrixXcd entries, double rf_unit_scale) {
  if (entries.rows() < 1 || entries.cols() < 1) {
    throw std::invalid_argument("ChannelSet: empty channel matrix");
  }
  if (!(rf_unit_scale > 0.0)) {
    throw std::invalid_argument("ChannelSet: rf_unit_scale must be > 0");
  }
  for (Eigen::Index k = 0; k < entries.rows(); ++k) {
    if (entries.row(k).norm() == 0.0) {
      throw std::invalid_argument("ChannelSet: all-zero channel row");
    }
  }
  ChannelSet cs;
  cs.entries = std::move(entries);
  cs.rf_unit_scale = rf_unit_scale;
  return cs;
}

double rf_power_mw(const ChannelSet& channels, int k,
                   const Eigen::MatrixXcd& S) {
  const auto row = channels.entries.row(k);
  const std::complex<double> q = row * S * row.adjoint();
  const double tr = std::abs(S.trace());
  if (std::abs(q.imag()) > 1e-10 * std::max(1.0, tr)) {
    throw std::runtime_error("rf_power_mw: quadratic form not real");
  }
  return channels.rf_unit_scale * q.real();
}

ChannelModelParams ChannelModelParams::create(
    double rician_factor, double distance_m, double ref_gain,
    double pathloss_exp, double tx_gain_dbi, double rx_gain_dbi,
    double element_spacing_ratio, int num_ers, int num_antennas) {
  if (!(rician_factor >= 0.0) || !(distance_m > 0.0) || !(ref_gain > 0.0)) {
    throw std::invalid_argument("ChannelModelParams: bad link constants");
  }
  if (num_ers < 1 || num_antennas < 1) {
    throw std::invalid_argument("ChannelModelParams: need K >= 1, M >= 1");
  }
  return ChannelModelParams{rician_factor, distance_m,  ref_gain,
                            pathloss_exp,  tx_gain_dbi, rx_gain_dbi,
                            element_spacing_ratio, num_ers, num_antennas};
}

ChannelModelParams ChannelModelParams::defaults() {
  return create(std::pow(10.0, 0.5), 4.0, 1e-3, 3.0, 10.0, 2.8, 0.5, 30, 4);
}

double average_power_gain(const ChannelModelParams& model) {
  const double gains =
      std::pow(10.0, (model.tx_gain_dbi + model.rx_gain_dbi) / 10.0);
  return gains * model.ref_gain *
         std::pow(model.distance_m, -model.pathloss_exp);
}

Eigen::VectorXcd los_row(const ChannelModelParams& model, int er_index) {
  if (er_index < 1 || er_index > model.num_ers) {
    throw std::out_of_range("los_row: er_index outside 1..K");
  }
  const double phi = -(5.0 / 12.0) * M_PI +
                     (2.0 / model.num_ers) * M_PI * (er_index - 1);
  const double theta =
      -2.0 * M_PI * model.element_spacing_ratio * std::sin(phi);
  const double amp = std::sqrt(average_power_gain(model));
  Eigen::VectorXcd row(model.num_antennas);
  for (int m = 0; m < model.num_antennas; ++m) {
    row(m) = std::polar(amp, theta * m);
  }
  return row;
}

ChannelSet sample_channels(const ChannelModelParams& model,
                           std::uint64_t seed) {
  const double g = average_power_gain(model);
  const double los_w = std::sqrt(model.rician_factor /
                                 (1.0 + model.rician_factor));
  const double nlos_w = std::sqrt(1.0 / (1.0 + model.rician_factor));
  const double sigma = std::sqrt(g / 2.0);  // per real component of CN(0, g)
  Eigen::MatrixXcd h(model.num_ers, model.num_antennas);
  for (int k = 1; k <= model.num_ers; ++k) {
    // Per-ER substream: row contents depend only on (seed, k).
    std::mt19937_64 gen(derive_seed(seed, static_cast<std::uint64_t>(k)));
    const Eigen::VectorXcd los = los_row(model, k);
    for (int m = 0; m < model.num_antennas; ++m) {
      double re, im;
      normal_pair(gen, re, im);
      const std::complex<double> nlos(sigma * re, sigma * im);
      h(k - 1, m) = los_w * los(m) + nlos_w * nlos;
    }
  }
  return ChannelSet::create(std::move(h), 1e3);
}

ChannelSet example1_channels() {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 4);
  h(0, 0) = h(0, 1) = 0.01;
  h(1, 2) = h(1, 3) = 0.01;
  return ChannelSet::create(std::move(h), 1e3);
}

void save_channels_csv(const ChannelSet& channels, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_channels_csv: cannot open " + path);
  out.precision(17);
  out << "er_index,antenna_index,re,im\n";
  for (int k = 0; k < channels.num_ers(); ++k) {
    for (int m = 0; m < channels.num_antennas(); ++m) {
      const auto& e = channels.entries(k, m);
      out << k + 1 << ',' << m + 1 << ',' << e.real() << ',' << e.imag()
          << '\n';
    }
  }
}

ChannelSet load_channels_csv(const std::string& path, double rf_unit_scale) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_channels_csv: cannot open " + path);
  std::string header;
  std::getline(in, header);
  int max_k = 0, max_m = 0;
  struct Rec {
    int k, m;
    double re, im;
  };
  std::vector<Rec> recs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Rec r;
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf", &r.k, &r.m, &r.re,
                    &r.im) != 4) {
      throw std::runtime_error("load_channels_csv: malformed row: " + line);
    }
    max_k = std::max(max_k, r.k);
    max_m = std::max(max_m, r.m);
    recs.push_back(r);
  }
  if (recs.empty()) throw std::runtime_error("load_channels_csv: no rows");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(max_k, max_m);
  for (const auto& r : recs) {
    h(r.k - 1, r.m - 1) = std::complex<double>(r.re, r.im);
  }
  return ChannelSet::create(std::move(h), rf_unit_scale);
}

}  // namespace wpt
