#include "jpesp/channel.hpp"

#include <cmath>

#include "jpesp/error.hpp"

namespace jpesp {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

double mean_channel_power(double distance_m, double rho0, double d0_m, double exponent) {
  const double d = distance_m > 0.0 ? distance_m : d0_m;
  return rho0 * std::pow(d / d0_m, -exponent);
}

ChannelDraw sample_channel(double distance_m, double rho0, double d0_m, double exponent, Rng& rng) {
  ChannelDraw out;
  out.clamped = !(distance_m > 0.0);
  const double variance = mean_channel_power(distance_m, rho0, d0_m, exponent);
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  const double re = normal(rng);
  const double im = normal(rng);
  out.h = {re, im};
  return out;
}

double link_gain(std::complex<double> h, double sigma2) {
  if (!(sigma2 > 0.0)) throw InvalidArgument("link_gain: sigma2 must be > 0");
  return std::norm(h) / sigma2;
}

double capacity_samples(double t_s, double p_w, double gain, bool selected, double bandwidth_hz,
                        double bits_per_sample) {
  if (!selected || t_s <= 0.0) return 0.0;
  return t_s * bandwidth_hz * std::log2(1.0 + gain * p_w) / bits_per_sample;
}

std::vector<double> aggregate_samples(const Matrix<double>& samples, std::span<const ClassGroup> groups) {
  std::vector<double> out;
  out.reserve(groups.size());
  for (const auto& g : groups) {
    double y = g.historical;
    for (int u : g.devices) {
      for (double x : samples.row(static_cast<std::size_t>(u))) y += x;
    }
    out.push_back(y);
  }
  return out;
}

}  // namespace jpesp
