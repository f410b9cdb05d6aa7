#include "fbdiv/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

namespace fbdiv::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t row_seed(std::uint64_t base, std::size_t row_index) {
    return base ^ ((row_index + 1) * 0xD1B54A32D192ED03ULL);
}

std::string fmt_float(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.8e", v);
    return buf;
}

Params effective_params(const SweepSpec& spec, double axis_value, const Curve& curve) {
    Params p = spec.fixed;
    switch (spec.axis) {
    case Axis::MeanSnrDb: p.mean_snr_db = axis_value; break;
    case Axis::Antennas: p.antennas = static_cast<int>(std::lround(axis_value)); break;
    case Axis::LatencyU: p.u = static_cast<int>(std::lround(axis_value)); break;
    }
    if (curve.nakagami_m) p.nakagami_m = *curve.nakagami_m;
    if (curve.p) p.p = *curve.p;
    if (curve.q) p.q = *curve.q;
    if (curve.d) p.d = *curve.d;
    return p;
}

} // namespace

std::string axis_name(Axis axis) {
    switch (axis) {
    case Axis::MeanSnrDb: return "mean_snr_db";
    case Axis::Antennas: return "antennas";
    case Axis::LatencyU: return "latency_u";
    }
    return "?";
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double value) { return 10.0 * std::log10(value); }

void SweepSpec::validate() const {
    if (values.empty())
        throw std::invalid_argument("sweep: axis values must be nonempty");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1]))
            throw std::invalid_argument("sweep: axis values must be strictly increasing");
    if (curves.empty())
        throw std::invalid_argument("sweep: at least one curve is required");
}

namespace {

SweepRow evaluate_row(const SweepSpec& spec, std::size_t row_index) {
    const double axis_value = spec.values[row_index / spec.curves.size()];
    const Curve& curve = spec.curves[row_index % spec.curves.size()];
    const Params p = effective_params(spec, axis_value, curve);
    SweepRow row;
    row.axis_value = axis_value;
    row.curve = curve.id;
    row.seed = spec.mc_samples ? row_seed(spec.seed, row_index) : spec.seed;

    const fading::ChannelModel ch(p.nakagami_m, db_to_linear(p.mean_snr_db));
    row.feasible = p.antennas >= 2 && p.u >= 1 &&
                   timing::feasible(
                       timing::ProtocolBudget(p.u, p.p, p.q, p.d, p.antennas, p.k));

    if (row.feasible) {
        const timing::ProtocolBudget b(p.u, p.p, p.q, p.d, p.antennas, p.k);
        row.n_sc = timing::n_sc(b);
        switch (curve.kind) {
        case CurveKind::ScExact:
            row.error_prob = schemes::sc_error_exact(ch, b);
            break;
        case CurveKind::AsymptoticBound:
            row.error_prob = fading::sc_cdf(
                ch, b.antennas,
                std::exp2(static_cast<double>(b.k) / b.u) - 1.0);
            break;
        case CurveKind::Ssc: {
            const auto eval = schemes::evaluate_ssc(ch, b, curve.strategy);
            row.error_prob = eval.error_prob;
            row.threshold_db = std::isinf(eval.threshold_used)
                                   ? kInf
                                   : linear_to_db(eval.threshold_used);
            if (spec.mc_samples) {
                montecarlo::McConfig mc;
                mc.samples = *spec.mc_samples;
                mc.seed = row.seed;
                const auto est =
                    montecarlo::simulate_ssc(ch, b, eval.threshold_used, mc);
                row.mc_estimate = est.error_rate;
                row.mc_std_error = est.std_error;
            }
            break;
        }
        }
        if (spec.mc_samples && curve.kind == CurveKind::ScExact) {
            montecarlo::McConfig mc;
            mc.samples = *spec.mc_samples;
            mc.seed = row.seed;
            const auto est = montecarlo::simulate_sc(ch, b, mc);
            row.mc_estimate = est.error_rate;
            row.mc_std_error = est.std_error;
        }
    }
    return row;
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    const std::size_t total = spec.values.size() * spec.curves.size();
    std::vector<SweepRow> rows(total);

    // Rows are independent; evaluate them concurrently and emit in index
    // order. With Monte Carlo attached the parallelism lives inside each
    // point instead (batch workers), so rows go sequentially.
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers =
        spec.mc_samples ? 1 : std::min<std::size_t>(hw, total);
    if (workers <= 1) {
        for (std::size_t i = 0; i < total; ++i) rows[i] = evaluate_row(spec, i);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= total) return;
                    rows[i] = evaluate_row(spec, i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::string to_csv(Axis axis, const std::vector<SweepRow>& rows) {
    std::string out =
        "axis,axis_value,curve,error_prob,threshold_db,n_sc,feasible,"
        "mc_estimate,mc_std_error,seed\n";
    const std::string axis_label = axis_name(axis);
    for (const SweepRow& r : rows) {
        out += axis_label;
        out += ',';
        out += fmt_float(r.axis_value);
        out += ',';
        out += r.curve;
        out += ',';
        if (r.error_prob) out += fmt_float(*r.error_prob);
        out += ',';
        if (r.threshold_db) out += fmt_float(*r.threshold_db);
        out += ',';
        if (r.n_sc) out += std::to_string(*r.n_sc);
        out += ',';
        out += r.feasible ? "true" : "false";
        out += ',';
        if (r.mc_estimate) out += fmt_float(*r.mc_estimate);
        out += ',';
        if (r.mc_std_error) out += fmt_float(*r.mc_std_error);
        out += ',';
        out += std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

schemes::ThresholdStrategy parse_strategy(const std::string& text) {
    if (text == "infinite") return schemes::InfiniteThreshold{};
    if (text == "naive") return schemes::NaiveThreshold{};
    if (text == "opt") return schemes::NumericOptimum{};
    if (text.rfind("fixed:", 0) == 0) {
        const double db = std::stod(text.substr(6));
        return schemes::FixedThreshold{db_to_linear(db)};
    }
    if (text.rfind("fa:", 0) == 0) {
        const std::string arg = text.substr(3);
        schemes::FadingDependent fa;
        if (arg == "min")
            fa.l = -kInf;
        else if (arg == "mean")
            fa.l = 1.0;
        else if (arg == "max")
            fa.l = kInf;
        else
            fa.l = std::stod(arg);
        return fa;
    }
    throw std::invalid_argument(
        "unknown strategy '" + text +
        "' (expected fixed:<dB>|infinite|naive|fa:<l|min|mean|max>|opt)");
}

std::string strategy_name(const schemes::ThresholdStrategy& strategy) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, schemes::FixedThreshold>) {
                return "fixed:" + fmt_float(linear_to_db(s.gamma0));
            } else if constexpr (std::is_same_v<T, schemes::InfiniteThreshold>) {
                return "infinite";
            } else if constexpr (std::is_same_v<T, schemes::NaiveThreshold>) {
                return "naive";
            } else if constexpr (std::is_same_v<T, schemes::FadingDependent>) {
                if (std::isinf(s.l)) return s.l > 0 ? "fa:max" : "fa:min";
                return "fa:" + fmt_float(s.l);
            } else {
                return "opt";
            }
        },
        strategy);
}

namespace {

std::vector<double> arange(double from, double to, double step) {
    std::vector<double> v;
    for (double x = from; x <= to + 1e-9; x += step) v.push_back(x);
    return v;
}

SweepSpec fig1_preset() {
    SweepSpec s;
    s.axis = Axis::MeanSnrDb;
    s.values = arange(4.0, 20.0, 1.0);
    s.fixed = Params{256, 200, 4, 16, 24, 6, 2.0, 12.0};
    s.curves = {
        {"sc", CurveKind::ScExact, {}, {}, {}, {}, {}},
        {"ssc-opt", CurveKind::Ssc, schemes::NumericOptimum{}, {}, {}, {}, {}},
        {"ssc-naive", CurveKind::Ssc, schemes::NaiveThreshold{}, {}, {}, {}, {}},
        {"ssc-fa-min", CurveKind::Ssc, schemes::FadingDependent{-kInf, 50}, {}, {}, {}, {}},
        {"ssc-fa-mean", CurveKind::Ssc, schemes::FadingDependent{1.0, 50}, {}, {}, {}, {}},
        {"ssc-fa-max", CurveKind::Ssc, schemes::FadingDependent{kInf, 50}, {}, {}, {}, {}},
        {"asymptotic-bound", CurveKind::AsymptoticBound, {}, {}, {}, {}, {}},
    };
    return s;
}

SweepSpec fig2_preset() {
    SweepSpec s;
    s.axis = Axis::Antennas;
    s.values = arange(2.0, 10.0, 1.0);
    s.fixed = Params{256, 200, 4, 16, 24, 6, 1.0, 12.0};
    for (double m : {1.0, 4.0}) {
        const std::string suffix = "-m" + std::to_string(static_cast<int>(m));
        s.curves.push_back({"sc" + suffix, CurveKind::ScExact, {}, m, {}, {}, {}});
        s.curves.push_back(
            {"ssc-opt" + suffix, CurveKind::Ssc, schemes::NumericOptimum{}, m, {}, {}, {}});
        s.curves.push_back({"ssc-fa-max" + suffix, CurveKind::Ssc,
                            schemes::FadingDependent{kInf, 50}, m, {}, {}, {}});
    }
    return s;
}

SweepSpec fig3_preset() {
    SweepSpec s;
    s.axis = Axis::LatencyU;
    s.values = arange(100.0, 400.0, 20.0);
    s.fixed = Params{256, 200, 4, 16, 24, 6, 2.0, 12.0};
    struct Profile {
        int p, q, d;
    };
    for (const Profile pr : {Profile{4, 16, 24}, Profile{2, 8, 12}}) {
        const std::string suffix = "-p" + std::to_string(pr.p) + "q" +
                                   std::to_string(pr.q) + "d" + std::to_string(pr.d);
        s.curves.push_back(
            {"sc" + suffix, CurveKind::ScExact, {}, {}, pr.p, pr.q, pr.d});
        s.curves.push_back({"ssc-opt" + suffix, CurveKind::Ssc,
                            schemes::NumericOptimum{}, {}, pr.p, pr.q, pr.d});
        s.curves.push_back({"ssc-fa-max" + suffix, CurveKind::Ssc,
                            schemes::FadingDependent{kInf, 50}, {}, pr.p, pr.q, pr.d});
    }
    return s;
}

} // namespace

SweepSpec preset(const std::string& name) {
    if (name == "fig1") return fig1_preset();
    if (name == "fig2") return fig2_preset();
    if (name == "fig3") return fig3_preset();
    throw std::invalid_argument("unknown preset '" + name + "' (fig1|fig2|fig3)");
}

} // namespace fbdiv::cli
