#pragma once

#include "fbdiv/fading.hpp"
#include "fbdiv/numerics.hpp"
#include "fbdiv/timing.hpp"

#include <limits>
#include <variant>
#include <vector>

namespace fbdiv::schemes {

// ---- threshold selection strategies ----

struct FixedThreshold {
    double gamma0; // linear SNR, >= 0
};
struct InfiniteThreshold {};
struct NaiveThreshold {};
struct FadingDependent {
    double l = std::numeric_limits<double>::infinity(); // power-mean factor
    int max_iters = 50;
};
struct NumericOptimum {};

using ThresholdStrategy = std::variant<FixedThreshold, InfiniteThreshold,
                                       NaiveThreshold, FadingDependent, NumericOptimum>;

enum class Scheme { SC, SSC };

/// Default quadrature accuracy for the scheme evaluators. The absolute floor
/// sits well below any plottable error probability so deep-tail curve values
/// keep relative accuracy; the generic numerics default would flatten them
/// at ~1e-12.
inline constexpr numerics::Tolerance kSchemeTolerance{5e-16, 1e-9, 200};

/// Full evaluation record: total error plus its per-branch decomposition.
/// t1_terms[i-1] is the contribution of stopping at antenna i (blocklength
/// n_{i-1}); t2_term covers the full-scan fallback.
struct SchemeEvaluation {
    double error_prob = 0.0;
    double threshold_used = 0.0; // may be +inf
    std::vector<double> t1_terms;
    double t2_term = 0.0;
    std::vector<int> n_values;
    ThresholdStrategy strategy{InfiniteThreshold{}};
};

// ---- evaluators ----

/// Fading-averaged finite-blocklength error of selection combining.
double sc_error_exact(const fading::ChannelModel& ch, const timing::ProtocolBudget& b,
                      const numerics::Tolerance& tol = kSchemeTolerance);

/// Outage approximation F(2^(k/n_sc) - 1)^M.
double sc_error_asymptotic(const fading::ChannelModel& ch, const timing::ProtocolBudget& b);

/// Switch-and-stay error at threshold gamma0 (may be +inf, which reproduces
/// selection combining exactly).
SchemeEvaluation ssc_error(const fading::ChannelModel& ch, const timing::ProtocolBudget& b,
                           double gamma0,
                           const numerics::Tolerance& tol = kSchemeTolerance);

// ---- threshold selection ----

/// Rate-matching threshold 2^(k/n_M) - 1 for the worst-case blocklength.
double naive_threshold(const timing::ProtocolBudget& b);

/// l-power mean; l = -inf/0/1/+inf give min, geometric, arithmetic, max.
double generalized_mean(const std::vector<int>& values, double l);

/// Fading-dependent threshold: targets the conditional error
/// xi = F(2^(k/n_tilde) - 1)^(M-1) at the l-power-mean blocklength and
/// inverts the error model at that target. Returns +inf when staying with
/// plain selection combining is preferable (either xi is already above the
/// SC error, or the candidate threshold does not actually beat SC).
double fading_threshold(const fading::ChannelModel& ch, const timing::ProtocolBudget& b,
                        double l, int max_iters = 50);

struct ThresholdOptimum {
    double gamma0 = 0.0; // may be +inf
    double error = 0.0;
};

/// Numerical minimization of the SSC error over the threshold. The search
/// bracket is [2^(k/u)-1, max(naive threshold, F^-1(1-1e-8))]; the naive,
/// fading-dependent and infinite thresholds are probed explicitly so the
/// result is never worse than any of them.
ThresholdOptimum optimal_threshold(const fading::ChannelModel& ch,
                                   const timing::ProtocolBudget& b);

/// Threshold value a strategy resolves to for a given channel/budget.
double resolve_threshold(const fading::ChannelModel& ch, const timing::ProtocolBudget& b,
                         const ThresholdStrategy& strategy);

/// SSC evaluation under a strategy, with the resolved threshold recorded.
SchemeEvaluation evaluate_ssc(const fading::ChannelModel& ch,
                              const timing::ProtocolBudget& b,
                              const ThresholdStrategy& strategy);

// ---- antenna-count optimization ----

struct BestAntennaCount {
    int antennas = 1;
    double error = 1.0;
};

/// Sweeps M = 1..max_antennas and returns the feasible count with the lowest
/// error; ties go to fewer antennas. M = 1 is evaluated with a single
/// measurement only (n = u - q).
BestAntennaCount best_antenna_count(const fading::ChannelModel& ch, int k, int u, int p,
                                    int q, int d, Scheme scheme,
                                    const ThresholdStrategy& strategy, int max_antennas);

/// Single-antenna baseline used by best_antenna_count: average error of a
/// (k, u - q) transmission over the plain SNR density.
double single_antenna_error(const fading::ChannelModel& ch, int k, int u, int q);

} // namespace fbdiv::schemes
