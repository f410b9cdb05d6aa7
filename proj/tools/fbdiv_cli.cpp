// fbdiv: finite-blocklength reliability of single-RF-chain receive diversity.
//
// Subcommands: eval, sweep, preset, optimize-threshold, optimize-antennas,
// validate. Exit codes: 0 ok, 1 parse error, 2 infeasible budget, 3 I/O
// error, 4 validation failure.

#include "fbdiv/fbcode.hpp"
#include "fbdiv/montecarlo.hpp"
#include "fbdiv/schemes.hpp"
#include "fbdiv/sweep.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace fbdiv;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOpts {
    int k = 256;
    int u = 200;
    int p = 4;
    int q = 16;
    int d = 24;
    int antennas = 6;
    double nakagami_m = 2.0;
    double mean_snr_db = 12.0;
    std::string scheme = "sc";
    std::string strategy = "opt";
    std::uint64_t mc_samples = 10'000'000;
    std::uint64_t seed = 0;
    std::string config_path;
};

// Flat key=value file with '#' comments. Keys are the long option names
// without the leading dashes; unknown keys are rejected to catch typos.
std::map<std::string, std::string> load_config(const std::string& path) {
    static const std::set<std::string> known_keys = {
        "k-bits",     "u",           "p",        "q",          "d",
        "antennas",   "nakagami-m",  "mean-snr-db", "scheme",  "strategy",
        "mc-samples", "seed"};
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string{};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (!known_keys.count(key))
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        kv[key] = value;
    }
    return kv;
}

// Binds CLI options to config keys: a flag given on the command line wins,
// otherwise the config value applies, otherwise the key must be defaulted.
class ConfigBinder {
public:
    void bind(CLI::Option* opt, std::string key,
              std::function<void(const std::string&)> apply, bool mandatory) {
        entries_.push_back({opt, std::move(key), std::move(apply), mandatory});
    }

    void resolve(const std::string& config_path) const {
        std::map<std::string, std::string> kv;
        if (!config_path.empty()) kv = load_config(config_path);
        for (const auto& e : entries_) {
            if (e.opt->count() > 0) continue;
            const auto it = kv.find(e.key);
            if (it != kv.end()) {
                try {
                    e.apply(it->second);
                } catch (const std::exception&) {
                    throw std::invalid_argument("config key '" + e.key +
                                                "': bad value '" + it->second + "'");
                }
            } else if (e.mandatory) {
                throw std::invalid_argument("missing required option --" + e.key +
                                            " (or config key '" + e.key + "')");
            }
        }
    }

private:
    struct Entry {
        CLI::Option* opt;
        std::string key;
        std::function<void(const std::string&)> apply;
        bool mandatory;
    };
    std::vector<Entry> entries_;
};

int parse_int(const std::string& s) {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
}

// Channel/budget options shared by the subcommands. With `params_mandatory`
// the five physical parameters must come from a CLI flag or a config key;
// p, q, d always carry the usual defaults.
std::shared_ptr<ConfigBinder> add_channel_options(CLI::App* cmd, CommonOpts& o,
                                                  bool params_mandatory) {
    auto binder = std::make_shared<ConfigBinder>();
    auto bind = [&](CLI::Option* opt, const std::string& key, auto setter,
                    bool mandatory) {
        binder->bind(opt, key, setter, mandatory);
    };
    bind(cmd->add_option("--k-bits", o.k, "Payload size in bits"), "k-bits",
         [&o](const std::string& s) { o.k = parse_int(s); }, params_mandatory);
    bind(cmd->add_option("--u", o.u, "Latency budget in channel uses"), "u",
         [&o](const std::string& s) { o.u = parse_int(s); }, params_mandatory);
    bind(cmd->add_option("--p", o.p, "Channel uses per antenna switch")
             ->capture_default_str(),
         "p", [&o](const std::string& s) { o.p = parse_int(s); }, false);
    bind(cmd->add_option("--q", o.q, "Channel uses per SNR measurement")
             ->capture_default_str(),
         "q", [&o](const std::string& s) { o.q = parse_int(s); }, false);
    bind(cmd->add_option("--d", o.d, "Nominal feedback cost in channel uses")
             ->capture_default_str(),
         "d", [&o](const std::string& s) { o.d = parse_int(s); }, false);
    bind(cmd->add_option("--antennas", o.antennas, "Number of receive antennas M"),
         "antennas", [&o](const std::string& s) { o.antennas = parse_int(s); },
         params_mandatory);
    bind(cmd->add_option("--nakagami-m", o.nakagami_m, "Nakagami fading shape"),
         "nakagami-m", [&o](const std::string& s) { o.nakagami_m = parse_double(s); },
         params_mandatory);
    bind(cmd->add_option("--mean-snr-db", o.mean_snr_db, "Average SNR in dB"),
         "mean-snr-db",
         [&o](const std::string& s) { o.mean_snr_db = parse_double(s); },
         params_mandatory);
    cmd->add_option("--config", o.config_path,
                    "Flat key=value config file (# comments)");
    return binder;
}

void bind_scheme(CLI::App* cmd, const std::shared_ptr<ConfigBinder>& binder,
                 CommonOpts& o,
                 bool scheme_mandatory) {
    binder->bind(cmd->add_option("--scheme", o.scheme, "sc | ssc"), "scheme",
                 [&o](const std::string& s) { o.scheme = s; }, scheme_mandatory);
    binder->bind(cmd->add_option("--strategy", o.strategy,
                                 "fixed:<dB>|infinite|naive|fa:<l|min|mean|max>|opt")
                     ->capture_default_str(),
                 "strategy", [&o](const std::string& s) { o.strategy = s; }, false);
}

void bind_mc(CLI::App* cmd, const std::shared_ptr<ConfigBinder>& binder,
             CommonOpts& o) {
    binder->bind(cmd->add_option("--mc-samples", o.mc_samples, "Sample count")
                     ->capture_default_str(),
                 "mc-samples",
                 [&o](const std::string& s) { o.mc_samples = parse_u64(s); }, false);
    binder->bind(cmd->add_option("--seed", o.seed, "Monte Carlo seed")
                     ->capture_default_str(),
                 "seed", [&o](const std::string& s) { o.seed = parse_u64(s); }, false);
}

void check_scheme_value(const CommonOpts& o) {
    if (o.scheme != "sc" && o.scheme != "ssc")
        throw std::invalid_argument("--scheme must be sc or ssc, got '" + o.scheme +
                                    "'");
}

timing::ProtocolBudget budget_of(const CommonOpts& o) {
    return timing::ProtocolBudget(o.u, o.p, o.q, o.d, o.antennas, o.k);
}

fading::ChannelModel channel_of(const CommonOpts& o) {
    return fading::ChannelModel(o.nakagami_m, cli::db_to_linear(o.mean_snr_db));
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.8e", v);
    return buf;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output path '" + path + "'");
    out << content;
    if (!out) throw IoError("failed writing to '" + path + "'");
}

void check_feasible_or_die(const timing::ProtocolBudget& b) {
    if (!timing::feasible(b))
        throw timing::InfeasibleError(
            "infeasible budget: requires u > (p+q)*M, got u=" + std::to_string(b.u) +
            ", (p+q)*M=" + std::to_string((b.p + b.q) * b.antennas));
}

void run_eval(const CommonOpts& o) {
    check_scheme_value(o);
    const auto b = budget_of(o);
    const auto ch = channel_of(o);
    check_feasible_or_die(b);

    std::ostringstream rep;
    rep << "scheme        : " << o.scheme << '\n';
    rep << "payload       : " << o.k << " bits\n";
    rep << "budget u/p/q/d: " << o.u << '/' << o.p << '/' << o.q << '/' << o.d
        << " channel uses\n";
    rep << "antennas      : " << o.antennas << ", nakagami m = " << o.nakagami_m << '\n';
    rep << "mean snr      : " << o.mean_snr_db << " dB\n";

    const auto ns = timing::n_values(b);
    rep << "n_i ledger    :";
    for (std::size_t i = 0; i < ns.size(); ++i) rep << " n_" << i << '=' << ns[i];
    rep << "  (n_sc=" << timing::n_sc(b) << ")\n";

    if (o.scheme == "sc") {
        rep << "error_prob    : " << fmt(schemes::sc_error_exact(ch, b)) << '\n';
        rep << "asymptotic    : " << fmt(schemes::sc_error_asymptotic(ch, b)) << '\n';
    } else {
        const auto strategy = cli::parse_strategy(o.strategy);
        const auto eval = schemes::evaluate_ssc(ch, b, strategy);
        rep << "strategy      : " << cli::strategy_name(strategy) << '\n';
        rep << "threshold     : "
            << (std::isinf(eval.threshold_used)
                    ? std::string("inf")
                    : fmt(cli::linear_to_db(eval.threshold_used)) + " dB (" +
                          fmt(eval.threshold_used) + " linear)")
            << '\n';
        rep << "error_prob    : " << fmt(eval.error_prob) << '\n';
        rep << "t1 terms      :";
        for (double t : eval.t1_terms) rep << ' ' << fmt(t);
        rep << '\n';
        rep << "t2 term       : " << fmt(eval.t2_term) << '\n';
    }
    std::cout << rep.str();
}

void run_validate(const CommonOpts& o, std::optional<double> analytic_override) {
    check_scheme_value(o);
    const auto b = budget_of(o);
    const auto ch = channel_of(o);
    check_feasible_or_die(b);

    montecarlo::McConfig mc;
    mc.samples = o.mc_samples;
    mc.seed = o.seed;

    double analytic;
    montecarlo::McEstimate est;
    if (o.scheme == "sc") {
        analytic = schemes::sc_error_exact(ch, b);
        est = montecarlo::simulate_sc(ch, b, mc);
    } else {
        const auto eval = schemes::evaluate_ssc(ch, b, cli::parse_strategy(o.strategy));
        analytic = eval.error_prob;
        est = montecarlo::simulate_ssc(ch, b, eval.threshold_used, mc);
    }
    if (analytic_override) analytic = *analytic_override;

    // z-score against the binomial standard error under the analytic value.
    const double se = std::sqrt(analytic * (1.0 - analytic) /
                                static_cast<double>(mc.samples));
    const double z = se > 0.0 ? (est.error_rate - analytic) / se
                              : (est.error_rate == analytic ? 0.0 : INFINITY);
    const bool pass = std::abs(z) <= 4.0;

    std::cout << "analytic      : " << fmt(analytic) << '\n';
    std::cout << "mc_estimate   : " << fmt(est.error_rate) << " (" << est.samples
              << " samples, seed " << est.seed << ")\n";
    std::cout << "mc_std_error  : " << fmt(est.std_error) << '\n';
    std::cout << "z_score       : " << fmt(z) << '\n';
    if (!est.reliable)
        std::cout << "note          : fewer than 10 error events; estimate unreliable\n";
    std::cout << (pass ? "PASS" : "FAIL") << '\n';
    if (!pass) throw ValidationFailure("Monte Carlo disagrees with analysis: |z| > 4");
}

std::vector<cli::Curve> parse_curves(const std::string& text) {
    std::vector<cli::Curve> curves;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        cli::Curve c;
        c.id = token;
        if (token == "sc") {
            c.kind = cli::CurveKind::ScExact;
        } else if (token == "bound") {
            c.kind = cli::CurveKind::AsymptoticBound;
        } else if (token.rfind("ssc:", 0) == 0) {
            c.kind = cli::CurveKind::Ssc;
            c.strategy = cli::parse_strategy(token.substr(4));
        } else {
            throw std::invalid_argument("unknown curve '" + token +
                                        "' (expected sc|bound|ssc:<strategy>)");
        }
        curves.push_back(std::move(c));
    }
    if (curves.empty()) throw std::invalid_argument("no curves given");
    return curves;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-blocklength error probability of SC/SSC receive diversity "
                 "under a hard latency budget"};
    app.require_subcommand(1);

    // ---- eval ----
    auto* eval = app.add_subcommand("eval", "Evaluate one configuration");
    CommonOpts eval_opts;
    auto eval_binder = add_channel_options(eval, eval_opts, true);
    bind_scheme(eval, eval_binder, eval_opts, true);
    eval->callback([&, eval_binder] {
        eval_binder->resolve(eval_opts.config_path);
        run_eval(eval_opts);
    });

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "Sweep one axis and emit CSV");
    CommonOpts sweep_opts;
    std::string sweep_axis = "mean-snr-db";
    double sweep_from = 4.0, sweep_to = 20.0, sweep_step = 1.0;
    std::string sweep_curves = "sc,ssc:opt";
    std::string sweep_out = "-";
    std::uint64_t sweep_mc = 0;
    auto sweep_binder = add_channel_options(sweep, sweep_opts, false);
    sweep->add_option("--axis", sweep_axis, "mean-snr-db | antennas | latency-u")
        ->capture_default_str()
        ->check(CLI::IsMember({"mean-snr-db", "antennas", "latency-u"}));
    sweep->add_option("--from", sweep_from, "First axis value")->required();
    sweep->add_option("--to", sweep_to, "Last axis value")->required();
    sweep->add_option("--step", sweep_step, "Axis step")->capture_default_str();
    sweep->add_option("--curves", sweep_curves,
                      "Comma list of sc|bound|ssc:<strategy>")
        ->capture_default_str();
    sweep->add_option("--out", sweep_out, "Output CSV path ('-' = stdout)");
    sweep->add_option("--mc-samples", sweep_mc,
                      "Attach Monte Carlo columns with this many samples");
    sweep->add_option("--seed", sweep_opts.seed, "Monte Carlo seed")
        ->capture_default_str();
    sweep->callback([&, sweep_binder] {
        sweep_binder->resolve(sweep_opts.config_path);
        cli::SweepSpec spec;
        if (sweep_axis == "mean-snr-db")
            spec.axis = cli::Axis::MeanSnrDb;
        else if (sweep_axis == "antennas")
            spec.axis = cli::Axis::Antennas;
        else
            spec.axis = cli::Axis::LatencyU;
        if (!(sweep_step > 0.0))
            throw std::invalid_argument("--step must be > 0");
        for (double x = sweep_from; x <= sweep_to + 1e-9; x += sweep_step)
            spec.values.push_back(x);
        spec.fixed = cli::Params{sweep_opts.k,          sweep_opts.u,
                                 sweep_opts.p,          sweep_opts.q,
                                 sweep_opts.d,          sweep_opts.antennas,
                                 sweep_opts.nakagami_m, sweep_opts.mean_snr_db};
        spec.curves = parse_curves(sweep_curves);
        if (sweep_mc > 0) spec.mc_samples = sweep_mc;
        spec.seed = sweep_opts.seed;
        write_output(sweep_out, cli::to_csv(spec.axis, cli::run_sweep(spec)));
    });

    // ---- preset ----
    auto* preset_cmd = app.add_subcommand("preset", "Run a built-in figure sweep");
    std::string preset_name;
    std::string preset_out = "-";
    std::uint64_t preset_mc = 0;
    std::uint64_t preset_seed = 0;
    std::optional<double> preset_from, preset_to, preset_step;
    preset_cmd->add_option("name", preset_name, "fig1 | fig2 | fig3")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
    preset_cmd->add_option("--out", preset_out, "Output CSV path ('-' = stdout)");
    preset_cmd->add_option("--mc-samples", preset_mc,
                           "Attach Monte Carlo columns with this many samples");
    preset_cmd->add_option("--seed", preset_seed, "Monte Carlo seed")
        ->capture_default_str();
    preset_cmd->add_option("--from", preset_from, "Override first axis value");
    preset_cmd->add_option("--to", preset_to, "Override last axis value");
    preset_cmd->add_option("--step", preset_step, "Override axis step");
    preset_cmd->callback([&] {
        cli::SweepSpec spec = cli::preset(preset_name);
        if (preset_from || preset_to || preset_step) {
            const double from = preset_from.value_or(spec.values.front());
            const double to = preset_to.value_or(spec.values.back());
            const double step = preset_step.value_or(
                spec.values.size() > 1 ? spec.values[1] - spec.values[0] : 1.0);
            if (!(step > 0.0)) throw std::invalid_argument("--step must be > 0");
            spec.values.clear();
            for (double x = from; x <= to + 1e-9; x += step) spec.values.push_back(x);
        }
        if (preset_mc > 0) spec.mc_samples = preset_mc;
        spec.seed = preset_seed;
        write_output(preset_out, cli::to_csv(spec.axis, cli::run_sweep(spec)));
    });

    // ---- optimize-threshold ----
    auto* opt_thr = app.add_subcommand("optimize-threshold",
                                       "Numerically optimal SSC threshold");
    CommonOpts thr_opts;
    auto thr_binder = add_channel_options(opt_thr, thr_opts, true);
    opt_thr->callback([&, thr_binder] {
        thr_binder->resolve(thr_opts.config_path);
        const auto b = budget_of(thr_opts);
        check_feasible_or_die(b);
        const auto best = schemes::optimal_threshold(channel_of(thr_opts), b);
        std::cout << "threshold     : "
                  << (std::isinf(best.gamma0)
                          ? std::string("inf")
                          : fmt(cli::linear_to_db(best.gamma0)) + " dB (" +
                                fmt(best.gamma0) + " linear)")
                  << '\n';
        std::cout << "error_prob    : " << fmt(best.error) << '\n';
    });

    // ---- optimize-antennas ----
    auto* opt_ant = app.add_subcommand(
        "optimize-antennas", "Best antenna count in [1, M]; --antennas is the cap");
    CommonOpts ant_opts;
    auto ant_binder = add_channel_options(opt_ant, ant_opts, true);
    bind_scheme(opt_ant, ant_binder, ant_opts, true);
    opt_ant->callback([&, ant_binder] {
        ant_binder->resolve(ant_opts.config_path);
        check_scheme_value(ant_opts);
        const auto best = schemes::best_antenna_count(
            channel_of(ant_opts), ant_opts.k, ant_opts.u, ant_opts.p, ant_opts.q,
            ant_opts.d,
            ant_opts.scheme == "sc" ? schemes::Scheme::SC : schemes::Scheme::SSC,
            cli::parse_strategy(ant_opts.strategy), ant_opts.antennas);
        std::cout << "best_antennas : " << best.antennas << '\n';
        std::cout << "error_prob    : " << fmt(best.error) << '\n';
    });

    // ---- validate ----
    auto* validate = app.add_subcommand("validate",
                                        "Monte Carlo cross-check of the analysis");
    CommonOpts val_opts;
    std::optional<double> analytic_override;
    auto val_binder = add_channel_options(validate, val_opts, true);
    bind_scheme(validate, val_binder, val_opts, true);
    bind_mc(validate, val_binder, val_opts);
    validate->add_option("--analytic-override", analytic_override,
                         "Replace the analytic value (negative-control hook)")
        ->group("");
    validate->callback([&, val_binder] {
        val_binder->resolve(val_opts.config_path);
        run_validate(val_opts, analytic_override);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const timing::InfeasibleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ValidationFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
