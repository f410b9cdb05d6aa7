#pragma once

#include "fbdiv/random.hpp"

namespace fbdiv::fading {

/// Nakagami-m fading channel, described through its per-antenna SNR law:
/// the SNR of a Nakagami-m envelope is Gamma(shape m, scale mean_snr/m).
struct ChannelModel {
    double m;        // Nakagami shape, >= 0.5
    double mean_snr; // E[SNR], linear scale, > 0

    ChannelModel(double shape, double mean);
};

/// Per-antenna SNR CDF F(x).
double snr_cdf(const ChannelModel& ch, double x);

/// Per-antenna SNR density f(x).
double snr_pdf(const ChannelModel& ch, double x);

/// CDF of the best of `antennas` iid branches: F(x)^M.
double sc_cdf(const ChannelModel& ch, int antennas, double x);

/// Density of the best branch: M F(x)^(M-1) f(x).
double sc_pdf(const ChannelModel& ch, int antennas, double x);

/// Inverse of snr_cdf on (0,1), by bisection.
double snr_quantile(const ChannelModel& ch, double prob);

/// One SNR draw from the channel.
double sample_snr(const ChannelModel& ch, RandomStream& rng);

} // namespace fbdiv::fading
