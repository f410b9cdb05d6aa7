#pragma once

#include "fbdiv/fading.hpp"
#include "fbdiv/numerics.hpp"

#include <functional>

namespace fbdiv::fbcode {

/// Short-packet code: k payload bits over n channel uses.
struct CodeSpec {
    int k; // payload bits, >= 1
    int n; // blocklength in channel uses, >= 1

    CodeSpec(int payload_bits, int blocklength);
    double rate() const { return static_cast<double>(k) / n; }
};

/// AWGN capacity log2(1+gamma), bits per channel use.
double capacity(double gamma);

/// Channel dispersion (1 - (1+gamma)^-2) * log2(e)^2.
double dispersion(double gamma);

/// Blocklength correction term of the normal approximation, expressed in
/// bits: ln(n) / (2 n ln 2). The capacity and dispersion are in bits, so the
/// correction is converted to match; switch the return expression to
/// ln(n)/(2n) for the nats reading.
double blocklength_penalty(double n);

/// Normal-approximation error probability of a (k, n) code at SNR gamma.
/// Accepts a real-valued blocklength so averaged/effective lengths can be
/// evaluated without rounding. Returns 1 at gamma = 0 (deep-fade limit).
double fb_error(int k, double n, double gamma);
double fb_error(const CodeSpec& code, double gamma);

/// Fading-averaged error: integral of fb_error against `pdf` over [lo, hi]
/// (hi may be infinite).
double avg_fb_error(const CodeSpec& code, const std::function<double(double)>& pdf,
                    double lo, double hi, const numerics::Tolerance& tol = {});

/// Infinite-blocklength proxy: P[gamma < 2^(k/n) - 1].
double asymptotic_outage(const fading::ChannelModel& ch, const CodeSpec& code);

struct SnrSolveResult {
    double snr = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Fixed-point inversion of fb_error in gamma: finds the SNR at which the
/// (k, n) code hits error probability xi. Starts from the infinite-SNR
/// dispersion and stops on relative change < 1e-9.
SnrSolveResult snr_for_target_error(int k, double n, double xi, int max_iters = 50);
SnrSolveResult snr_for_target_error(const CodeSpec& code, double xi, int max_iters = 50);

} // namespace fbdiv::fbcode
