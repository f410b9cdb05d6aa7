#pragma once

#include "fbdiv/fading.hpp"
#include "fbdiv/timing.hpp"

#include <cstdint>

namespace fbdiv::montecarlo {

struct McConfig {
    std::uint64_t samples = 10'000'000;
    std::uint64_t seed = 0;
    std::uint64_t batch_size = 100'000;

    void validate() const;
};

struct McEstimate {
    double error_rate = 0.0;
    double std_error = 0.0; // binomial, sqrt(e(1-e)/N)
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    // False when fewer than 10 error events were observed; the estimate is
    // then dominated by Poisson noise.
    bool reliable = true;
};

/// Protocol simulation of selection combining: draw M branch SNRs, transmit
/// on the best with blocklength n_sc, decide the error by one Bernoulli draw
/// against the conditional finite-blocklength error.
///
/// Samples are partitioned into fixed batches; batch b consumes an
/// independent stream derived from (seed, b), so the estimate is identical
/// for any worker count.
McEstimate simulate_sc(const fading::ChannelModel& ch, const timing::ProtocolBudget& b,
                       const McConfig& cfg);

/// Protocol simulation of switch-and-stay: scan branches in order, stop at
/// the first SNR >= gamma0 (blocklength n_{i} after i switches), otherwise
/// fall back to the best branch with blocklength n_M. gamma0 may be +inf,
/// which reproduces simulate_sc draw for draw.
McEstimate simulate_ssc(const fading::ChannelModel& ch, const timing::ProtocolBudget& b,
                        double gamma0, const McConfig& cfg);

} // namespace fbdiv::montecarlo
