#include "fbdiv/schemes.hpp"

#include "fbdiv/fbcode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fbdiv::schemes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The averaged integrands switch from ~1 to ~0 within a narrow band around
// the rate-matching SNR 2^(k/n)-1 of the blocklength in play. Seeding panel
// boundaries around that band keeps the feature visible to the quadrature on
// arbitrarily wide intervals, which preserves relative accuracy for error
// values far below the generic absolute tolerance.
double integrate_around_transition(const std::function<double(double)>& f, double lo,
                                   double hi, int k, double n,
                                   const numerics::Tolerance& tol) {
    const double mid = std::exp2(k / n) - 1.0;
    std::vector<double> knots{lo};
    for (double s : {0.5 * mid, 2.0 * mid, 8.0 * mid})
        if (s > knots.back() && s < hi) knots.push_back(s);
    knots.push_back(hi);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        total += numerics::integrate(f, knots[i], knots[i + 1], tol);
    return total;
}

double conditional_branch_error(const fading::ChannelModel& ch, int k, int n,
                                double gamma0, const numerics::Tolerance& tol) {
    // Integral of fb_error(k, n, x) f(x) over [gamma0, inf). The 1/(1-F)
    // normalizer of the truncated density cancels against the (1-F)
    // prefactor of the stop probability, so it never appears here.
    if (n < 1) {
        // No transmission time on this branch: conditional error is 1, and
        // the integral collapses to the branch probability mass.
        return 1.0 - fading::snr_cdf(ch, gamma0);
    }
    return integrate_around_transition(
        [&ch, k, n](double x) { return fbcode::fb_error(k, n, x) * fading::snr_pdf(ch, x); },
        gamma0, kInf, k, n, tol);
}

} // namespace

double sc_error_exact(const fading::ChannelModel& ch, const timing::ProtocolBudget& b,
                      const numerics::Tolerance& tol) {
    const int n = timing::n_sc(b);
    const int k = b.k;
    const int M = b.antennas;
    const double v = integrate_around_transition(
        [&ch, k, n, M](double x) {
            return fbcode::fb_error(k, n, x) * fading::sc_pdf(ch, M, x);
        },
        0.0, kInf, k, n, tol);
    return std::min(1.0, std::max(0.0, v));
}

double sc_error_asymptotic(const fading::ChannelModel& ch, const timing::ProtocolBudget& b) {
    const double thr = std::exp2(static_cast<double>(b.k) / timing::n_sc(b)) - 1.0;
    return fading::sc_cdf(ch, b.antennas, thr);
}

SchemeEvaluation ssc_error(const fading::ChannelModel& ch, const timing::ProtocolBudget& b,
                           double gamma0, const numerics::Tolerance& tol) {
    if (!(gamma0 >= 0.0))
        throw std::domain_error("ssc_error: threshold must be >= 0 or infinite");

    SchemeEvaluation eval;
    eval.threshold_used = gamma0;
    eval.n_values = timing::n_values(b);
    eval.t1_terms.assign(b.antennas, 0.0);
    if (std::isinf(gamma0))
        eval.strategy = InfiniteThreshold{};
    else
        eval.strategy = FixedThreshold{gamma0};

    if (std::isinf(gamma0)) {
        // No branch ever passes; the chain degenerates to selection combining.
        eval.t2_term = sc_error_exact(ch, b, tol);
        eval.error_prob = eval.t2_term;
        return eval;
    }

    const double F0 = fading::snr_cdf(ch, gamma0);
    double stay_weight = 1.0; // F0^(i-1)
    double total = 0.0;
    for (int i = 1; i <= b.antennas; ++i) {
        double term = 0.0;
        if (stay_weight > 1e-300)
            term = stay_weight *
                   conditional_branch_error(ch, b.k, eval.n_values[i - 1], gamma0, tol);
        eval.t1_terms[i - 1] = term;
        total += term;
        stay_weight *= F0;
    }

    // Fallback term: the F^M prefactor cancels the F_sc(gamma0) normalizer of
    // the truncated best-branch density.
    if (gamma0 > 0.0 && stay_weight > 1e-300) {
        const int k = b.k;
        const int nM = eval.n_values[b.antennas];
        const int M = b.antennas;
        eval.t2_term = integrate_around_transition(
            [&ch, k, nM, M](double x) {
                return fbcode::fb_error(k, nM, x) * fading::sc_pdf(ch, M, x);
            },
            0.0, gamma0, k, nM, tol);
    }
    eval.error_prob = total + eval.t2_term;
    return eval;
}

double naive_threshold(const timing::ProtocolBudget& b) {
    return std::exp2(static_cast<double>(b.k) / timing::n_sc(b)) - 1.0;
}

double generalized_mean(const std::vector<int>& values, double l) {
    if (values.empty())
        throw std::domain_error("generalized_mean: values must be nonempty");
    for (int v : values)
        if (v <= 0) throw std::domain_error("generalized_mean: values must be positive");

    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    if (std::isinf(l)) return l > 0 ? *mx : *mn;
    if (l == 0.0) { // geometric-mean limit
        double s = 0.0;
        for (int v : values) s += std::log(static_cast<double>(v));
        return std::exp(s / values.size());
    }
    // Scale by the dominant element so the powers stay bounded for large |l|.
    const double scale = l > 0 ? static_cast<double>(*mx) : static_cast<double>(*mn);
    double s = 0.0;
    for (int v : values) s += std::pow(v / scale, l);
    return scale * std::pow(s / values.size(), 1.0 / l);
}

double fading_threshold(const fading::ChannelModel& ch, const timing::ProtocolBudget& b,
                        double l, int max_iters) {
    const std::vector<int> ns = timing::n_values(b);
    const double n_tilde = generalized_mean(ns, l);
    const double xi =
        std::pow(fading::snr_cdf(ch, std::exp2(b.k / n_tilde) - 1.0), b.antennas - 1);
    const double esc = sc_error_exact(ch, b);
    if (xi >= esc) return kInf;

    const auto solve = fbcode::snr_for_target_error(b.k, n_tilde, xi, max_iters);
    if (!solve.converged)
        throw numerics::ConvergenceError(
            "fading_threshold: SNR fixed point did not converge");
    // Operating SSC at this threshold must actually beat plain SC; in the
    // high-mean-SNR regime it does not, and SC is the right mode.
    if (ssc_error(ch, b, solve.snr).error_prob >= esc) return kInf;
    return solve.snr;
}

ThresholdOptimum optimal_threshold(const fading::ChannelModel& ch,
                                   const timing::ProtocolBudget& b) {
    const double esc = sc_error_exact(ch, b);
    const double lo = std::exp2(static_cast<double>(b.k) / b.u) - 1.0;
    const double naive = naive_threshold(b);
    const double hi = std::max(naive, fading::snr_quantile(ch, 1.0 - 1e-8));

    const auto objective = [&](double g0) { return ssc_error(ch, b, g0).error_prob; };
    const auto scan = numerics::minimize_scalar(objective, lo, hi, 1e-6);

    ThresholdOptimum best{scan.argmin, scan.min_value};
    auto consider = [&](double g0, double err) {
        if (err < best.error) best = {g0, err};
    };
    consider(naive, objective(naive));
    const double fa = fading_threshold(ch, b, kInf);
    if (std::isfinite(fa)) consider(fa, objective(fa));
    consider(kInf, esc);
    return best;
}

double resolve_threshold(const fading::ChannelModel& ch, const timing::ProtocolBudget& b,
                         const ThresholdStrategy& strategy) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FixedThreshold>) {
                if (!(s.gamma0 >= 0.0))
                    throw std::domain_error("FixedThreshold: gamma0 must be >= 0");
                return s.gamma0;
            } else if constexpr (std::is_same_v<T, InfiniteThreshold>) {
                return kInf;
            } else if constexpr (std::is_same_v<T, NaiveThreshold>) {
                return naive_threshold(b);
            } else if constexpr (std::is_same_v<T, FadingDependent>) {
                return fading_threshold(ch, b, s.l, s.max_iters);
            } else {
                return optimal_threshold(ch, b).gamma0;
            }
        },
        strategy);
}

SchemeEvaluation evaluate_ssc(const fading::ChannelModel& ch,
                              const timing::ProtocolBudget& b,
                              const ThresholdStrategy& strategy) {
    SchemeEvaluation eval = ssc_error(ch, b, resolve_threshold(ch, b, strategy));
    eval.strategy = strategy;
    return eval;
}

double single_antenna_error(const fading::ChannelModel& ch, int k, int u, int q) {
    const int n = u - q;
    if (n < 1)
        throw timing::InfeasibleError("single antenna infeasible: u <= q");
    const double v = integrate_around_transition(
        [&ch, k, n](double x) { return fbcode::fb_error(k, n, x) * fading::snr_pdf(ch, x); },
        0.0, kInf, k, n, kSchemeTolerance);
    return std::min(1.0, std::max(0.0, v));
}

BestAntennaCount best_antenna_count(const fading::ChannelModel& ch, int k, int u, int p,
                                    int q, int d, Scheme scheme,
                                    const ThresholdStrategy& strategy, int max_antennas) {
    if (max_antennas < 2)
        throw std::domain_error("best_antenna_count: max_antennas must be >= 2");

    BestAntennaCount best;
    bool found = false;
    for (int M = 1; M <= max_antennas; ++M) {
        double err;
        if (M == 1) {
            if (u - q < 1) continue;
            err = single_antenna_error(ch, k, u, q);
        } else {
            const timing::ProtocolBudget b(u, p, q, d, M, k);
            if (!timing::feasible(b)) continue;
            err = scheme == Scheme::SC ? sc_error_exact(ch, b)
                                       : evaluate_ssc(ch, b, strategy).error_prob;
        }
        if (!found || err < best.error) {
            best = {M, err};
            found = true;
        }
    }
    if (!found)
        throw timing::InfeasibleError("no feasible antenna count in [1, " +
                                      std::to_string(max_antennas) + "]");
    return best;
}

} // namespace fbdiv::schemes
