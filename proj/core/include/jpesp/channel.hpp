#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "jpesp/matrix.hpp"

namespace jpesp {

/// Random engine used everywhere a seed is accepted.
using Rng = std::mt19937_64;

/// Converts between dBm and watts: P[W] = 10^((dBm - 30) / 10).
double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

/// Mean channel power rho0 * (d / d0)^(-exponent).
double mean_channel_power(double distance_m, double rho0, double d0_m, double exponent);

struct ChannelDraw {
  std::complex<double> h;
  /// The distance was not positive and was replaced by d0.
  bool clamped = false;
};

/// Rayleigh draw: h ~ CN(0, rho0 * (d / d0)^(-exponent)).
ChannelDraw sample_channel(double distance_m, double rho0, double d0_m, double exponent, Rng& rng);

/// SNR per watt of transmit power, |h|^2 / sigma2.
double link_gain(std::complex<double> h, double sigma2);

/// Shannon upper bound on the number of samples uploaded in t seconds at
/// power p over a link of gain F: t * B * log2(1 + s * F * p) / A.
double capacity_samples(double t_s, double p_w, double gain, bool selected, double bandwidth_hz,
                        double bits_per_sample);

/// Devices that contribute samples to one class of one task.
struct ClassGroup {
  int task = 1;
  int cls = 1;
  std::vector<int> devices;
  double historical = 0.0;
};

/// y_{c,m} = sum over devices in the group of their uploaded samples (rows of
/// `samples`, one column per vertex) plus the group's historical samples.
std::vector<double> aggregate_samples(const Matrix<double>& samples, std::span<const ClassGroup> groups);

}  // namespace jpesp
