#include "fbdiv/fbcode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fbdiv::fbcode {

namespace {
constexpr double kLog2e = 1.44269504088896340736;  // log2(e)
constexpr double kLn2 = 0.69314718055994530942;
constexpr double kDispersionLimit = kLog2e * kLog2e;
} // namespace

CodeSpec::CodeSpec(int payload_bits, int blocklength) : k(payload_bits), n(blocklength) {
    if (k < 1) throw std::domain_error("CodeSpec: payload must be >= 1 bit");
    if (n < 1) throw std::domain_error("CodeSpec: blocklength must be >= 1 channel use");
}

double capacity(double gamma) {
    if (gamma < 0.0)
        throw std::domain_error("capacity: SNR must be >= 0");
    return std::log2(1.0 + gamma);
}

double dispersion(double gamma) {
    if (gamma < 0.0)
        throw std::domain_error("dispersion: SNR must be >= 0");
    if (std::isinf(gamma)) return kDispersionLimit;
    const double g1 = 1.0 + gamma;
    return (1.0 - 1.0 / (g1 * g1)) * kDispersionLimit;
}

double blocklength_penalty(double n) {
    return std::log(n) / (2.0 * n * kLn2);
}

double fb_error(int k, double n, double gamma) {
    if (k < 1 || !(n >= 1.0))
        throw std::domain_error("fb_error: requires k >= 1 and n >= 1");
    if (gamma < 0.0)
        throw std::domain_error("fb_error: SNR must be >= 0");
    if (gamma == 0.0) return 1.0;  // dispersion vanishes; deep-fade limit
    const double arg = (capacity(gamma) - k / n + blocklength_penalty(n)) /
                       std::sqrt(dispersion(gamma) / n);
    return numerics::q_function(arg);
}

double fb_error(const CodeSpec& code, double gamma) {
    return fb_error(code.k, code.n, gamma);
}

double avg_fb_error(const CodeSpec& code, const std::function<double(double)>& pdf,
                    double lo, double hi, const numerics::Tolerance& tol) {
    const int k = code.k;
    const double n = code.n;
    const double v = numerics::integrate(
        [k, n, &pdf](double x) { return fb_error(k, n, x) * pdf(x); }, lo, hi, tol);
    return std::min(1.0, std::max(0.0, v));
}

double asymptotic_outage(const fading::ChannelModel& ch, const CodeSpec& code) {
    return fading::snr_cdf(ch, std::exp2(code.rate()) - 1.0);
}

SnrSolveResult snr_for_target_error(int k, double n, double xi, int max_iters) {
    if (!(xi > 0.0) || !(xi < 1.0))
        throw std::domain_error("snr_for_target_error: target must lie in (0, 1)");
    if (!(n >= 2.0))
        throw std::domain_error("snr_for_target_error: requires n >= 2");
    if (max_iters < 1)
        throw std::domain_error("snr_for_target_error: requires max_iters >= 1");

    const double qi = numerics::q_inverse(xi);
    const double base = k / n - blocklength_penalty(n);
    double variance = kDispersionLimit;  // dispersion at the gamma = inf seed
    double prev = std::numeric_limits<double>::infinity();
    for (int t = 1; t <= max_iters; ++t) {
        double g = std::exp2(base + std::sqrt(variance / n) * qi) - 1.0;
        const bool restarted = !std::isfinite(g) || g <= 0.0;
        if (restarted) g = std::exp2(k / n) - 1.0;  // asymptotic restart
        // a restart re-seeds the map; only genuine iterates count as converged
        if (!restarted && std::isfinite(prev) && std::abs(g - prev) <= 1e-9 * g)
            return {g, t, true};
        prev = g;
        variance = dispersion(g);
    }
    return {prev, max_iters, false};
}

SnrSolveResult snr_for_target_error(const CodeSpec& code, double xi, int max_iters) {
    return snr_for_target_error(code.k, code.n, xi, max_iters);
}

} // namespace fbdiv::fbcode
