#pragma once

#include "fbdiv/montecarlo.hpp"
#include "fbdiv/schemes.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fbdiv::cli {

enum class Axis { MeanSnrDb, Antennas, LatencyU };

std::string axis_name(Axis axis);

enum class CurveKind {
    ScExact,        // fading-averaged SC error
    Ssc,            // SSC under a threshold strategy
    AsymptoticBound // F(2^(k/u)-1)^M outage lower bound
};

/// One curve of a sweep. Overrides let a preset carry several fading or
/// overhead configurations in a single file (they replace the fixed
/// parameter for this curve only).
struct Curve {
    std::string id;
    CurveKind kind = CurveKind::ScExact;
    schemes::ThresholdStrategy strategy{schemes::InfiniteThreshold{}};
    std::optional<double> nakagami_m;
    std::optional<int> p, q, d;
};

/// Scalar configuration; SNR is carried in dB and converted at the edge.
struct Params {
    int k = 256;
    int u = 200;
    int p = 4;
    int q = 16;
    int d = 24;
    int antennas = 6;
    double nakagami_m = 2.0;
    double mean_snr_db = 12.0;
};

struct SweepSpec {
    Axis axis = Axis::MeanSnrDb;
    std::vector<double> values; // strictly increasing
    Params fixed;
    std::vector<Curve> curves;
    std::optional<std::uint64_t> mc_samples;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SweepRow {
    double axis_value = 0.0;
    std::string curve;
    std::optional<double> error_prob; // empty when infeasible
    std::optional<double> threshold_db; // +inf = SSC degenerated to SC
    std::optional<int> n_sc;
    bool feasible = true;
    std::optional<double> mc_estimate;
    std::optional<double> mc_std_error;
    std::uint64_t seed = 0;
};

/// Evaluates every (axis value, curve) pair; axis-major, curve-minor order.
/// Infeasible points are recorded, not fatal.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// CSV with header axis,axis_value,curve,error_prob,threshold_db,n_sc,
/// feasible,mc_estimate,mc_std_error,seed. Floats use 9-significant-digit
/// scientific notation; output is byte-stable for identical inputs.
std::string to_csv(Axis axis, const std::vector<SweepRow>& rows);

/// Built-in sweeps: "fig1" (SNR sweep), "fig2" (antenna sweep, two fading
/// shapes), "fig3" (latency sweep, two overhead profiles).
SweepSpec preset(const std::string& name);

/// Parses fixed:<gamma0_dB> | infinite | naive | fa:<l|min|mean|max> | opt.
schemes::ThresholdStrategy parse_strategy(const std::string& text);
std::string strategy_name(const schemes::ThresholdStrategy& strategy);

double db_to_linear(double db);
double linear_to_db(double value);

} // namespace fbdiv::cli
