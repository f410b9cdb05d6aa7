#include "fbdiv/fading.hpp"

#include "fbdiv/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fbdiv::fading {

ChannelModel::ChannelModel(double shape, double mean) : m(shape), mean_snr(mean) {
    if (!(m >= 0.5))
        throw std::domain_error("ChannelModel: Nakagami shape must be >= 0.5");
    if (!(mean_snr > 0.0) || !std::isfinite(mean_snr))
        throw std::domain_error("ChannelModel: mean SNR must be finite and > 0");
}

double snr_cdf(const ChannelModel& ch, double x) {
    if (std::isinf(x) && x > 0.0) return 1.0;
    if (x < 0.0)
        throw std::domain_error("snr_cdf: SNR must be >= 0");
    return numerics::reg_lower_gamma(ch.m, ch.m * x / ch.mean_snr);
}

double snr_pdf(const ChannelModel& ch, double x) {
    if (x < 0.0)
        throw std::domain_error("snr_pdf: SNR must be >= 0");
    const double theta = ch.mean_snr / ch.m;
    if (x == 0.0) {
        if (ch.m > 1.0) return 0.0;
        if (ch.m == 1.0) return 1.0 / theta;
        return std::numeric_limits<double>::infinity();
    }
    return std::exp((ch.m - 1.0) * std::log(x) - x / theta - std::lgamma(ch.m) -
                    ch.m * std::log(theta));
}

namespace {
void check_antennas(int antennas) {
    if (antennas < 1)
        throw std::domain_error("antenna count must be >= 1");
}
} // namespace

double sc_cdf(const ChannelModel& ch, int antennas, double x) {
    check_antennas(antennas);
    return std::pow(snr_cdf(ch, x), antennas);
}

double sc_pdf(const ChannelModel& ch, int antennas, double x) {
    check_antennas(antennas);
    if (antennas == 1) return snr_pdf(ch, x);
    return antennas * std::pow(snr_cdf(ch, x), antennas - 1) * snr_pdf(ch, x);
}

double snr_quantile(const ChannelModel& ch, double prob) {
    if (!(prob > 0.0) || !(prob < 1.0))
        throw std::domain_error("snr_quantile: probability must lie in (0, 1)");
    double hi = ch.mean_snr;
    while (snr_cdf(ch, hi) < prob) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (snr_cdf(ch, mid) < prob ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double sample_snr(const ChannelModel& ch, RandomStream& rng) {
    return rng.gamma(ch.m, ch.mean_snr / ch.m);
}

} // namespace fbdiv::fading
