#include "fbdiv/montecarlo.hpp"

#include "fbdiv/fbcode.hpp"
#include "fbdiv/random.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace fbdiv::montecarlo {

void McConfig::validate() const {
    if (samples < 1) throw std::domain_error("McConfig: samples must be >= 1");
    if (batch_size < 1) throw std::domain_error("McConfig: batch_size must be >= 1");
}

namespace {

// Counts error events in one batch. Both schemes consume the stream in the
// same per-sample pattern (M SNR draws, then one uniform), so SC and SSC
// with the same seed see identical randomness.
template <typename PickBranch>
std::uint64_t run_batch(const fading::ChannelModel& ch, int antennas, int k,
                        RandomStream rng, std::uint64_t count, PickBranch&& pick) {
    std::vector<double> snrs(antennas);
    std::uint64_t errors = 0;
    for (std::uint64_t s = 0; s < count; ++s) {
        for (int j = 0; j < antennas; ++j) snrs[j] = fading::sample_snr(ch, rng);
        const auto [n, snr] = pick(snrs);
        const double eps = fbcode::fb_error(k, static_cast<double>(n), snr);
        if (rng.uniform() < eps) ++errors;
    }
    return errors;
}

struct BranchChoice {
    int n;
    double snr;
};

template <typename PickBranch>
McEstimate run(const fading::ChannelModel& ch, const timing::ProtocolBudget& b,
               const McConfig& cfg, PickBranch&& pick) {
    cfg.validate();
    if (!timing::feasible(b))
        throw timing::InfeasibleError("Monte Carlo requires a feasible budget");

    const std::uint64_t nbatches = (cfg.samples + cfg.batch_size - 1) / cfg.batch_size;
    std::vector<std::uint64_t> counts(nbatches, 0);

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(hw, nbatches));
    std::atomic<std::uint64_t> next{0};

    auto work = [&]() {
        for (;;) {
            const std::uint64_t bi = next.fetch_add(1);
            if (bi >= nbatches) return;
            const std::uint64_t begin = bi * cfg.batch_size;
            const std::uint64_t count = std::min(cfg.batch_size, cfg.samples - begin);
            counts[bi] = run_batch(ch, b.antennas, b.k,
                                   RandomStream::substream(cfg.seed, bi), count, pick);
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();

    std::uint64_t errors = 0;
    for (std::uint64_t c : counts) errors += c;

    McEstimate est;
    est.samples = cfg.samples;
    est.seed = cfg.seed;
    est.error_rate = static_cast<double>(errors) / static_cast<double>(cfg.samples);
    est.std_error =
        std::sqrt(est.error_rate * (1.0 - est.error_rate) / static_cast<double>(cfg.samples));
    est.reliable = errors >= 10;
    return est;
}

} // namespace

McEstimate simulate_sc(const fading::ChannelModel& ch, const timing::ProtocolBudget& b,
                       const McConfig& cfg) {
    const int nsc = timing::n_sc(b);
    return run(ch, b, cfg, [nsc](const std::vector<double>& snrs) {
        double best = snrs[0];
        for (double v : snrs)
            if (v > best) best = v;
        return BranchChoice{nsc, best};
    });
}

McEstimate simulate_ssc(const fading::ChannelModel& ch, const timing::ProtocolBudget& b,
                        double gamma0, const McConfig& cfg) {
    if (!(gamma0 >= 0.0))
        throw std::domain_error("simulate_ssc: threshold must be >= 0 or infinite");
    const std::vector<int> ns = timing::n_values(b);
    return run(ch, b, cfg, [&ns, gamma0](const std::vector<double>& snrs) {
        for (std::size_t j = 0; j < snrs.size(); ++j)
            if (snrs[j] >= gamma0) return BranchChoice{ns[j], snrs[j]};
        double best = snrs[0];
        for (double v : snrs)
            if (v > best) best = v;
        return BranchChoice{ns[snrs.size()], best};
    });
}

} // namespace fbdiv::montecarlo
