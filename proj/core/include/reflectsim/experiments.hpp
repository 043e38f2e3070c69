#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "reflectsim/optimizer.hpp"

namespace reflectsim {

// Parsed experiment description. Values mirror the config file keys; the
// dBm/dB fields are converted to linear by link_params().
struct ExperimentConfig {
    // scenario
    double edge_m = 10.0;
    int grid_divisions = 10;
    int pairs = 5;
    int arrays = 1;
    int elements_per_array = 48;
    double element_spacing_m = 0.0625;
    double carrier_hz = 2.4e9;
    double alpha = 3.0;
    double tx_power_mw = 1.0;
    double noise_dbm = -90.0;
    double beta_db = 5.0;
    double rate_bps = 1e5;
    std::optional<double> d_min_m;
    std::optional<double> d_max_m;

    // sweep
    enum class Axis { Pairs, Edge, Elements, Arrays };
    Axis axis = Axis::Pairs;
    std::vector<double> sweep_values{1, 2, 3, 4, 5};

    // phase search
    std::string phase_method = "coordinate_ascent"; // or "exhaustive"
    int phase_levels = 360;                          // step = 2*pi / levels
    int max_sweeps = 20;
    double convergence_tol = 1e-9;
    int restarts = 0;

    // placement search
    std::string placement_mode = "exhaustive"; // or "randomized"
    std::uint64_t sample_budget = 1000;
    std::uint64_t exhaustive_cap = 10000000;

    // phase-opt subcommand
    std::string objective = "transport"; // "min_sinr", "single_link"
    int objective_link = 0;

    // validation suite
    int chain_scenarios = 1000;
    double chain_tolerance_rel = 1e-9;
    int mc_scenarios = 20;
    std::uint64_t mc_symbols = 100000;
    double mc_tolerance_db = 0.2;
    // absent -> run everything; present (possibly empty) -> that selection
    std::optional<std::vector<std::string>> properties;

    std::uint64_t seed = 0;
    int workers = 1;

    bool operator==(const ExperimentConfig&) const = default;

    LinkParams link_params() const;
    Room make_room() const;
    std::vector<ArrayLayout> make_layouts() const; // empty when no elements
    PhaseSearchConfig phase_config() const;
    PlacementSearchConfig placement_config() const;
};

const char* axis_name(ExperimentConfig::Axis axis);

// Line-based `key = value` text, `#` comments, snake_case keys.
// Throws ConfigError with a line number on syntax problems, and with the
// key name on invariant violations. Unknown and duplicate keys are
// rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& c);

// One output row of a sweep. Wall time is operator feedback (stderr),
// never CSV content, so output bytes stay run-independent.
struct SweepRow {
    double sweep_value = 0.0;
    std::optional<double> upper_bound; // absent -> INVALID marker
    std::optional<double> achievable;
    std::optional<std::uint64_t> statuses_evaluated;
    double wall_time_s = 0.0;
};

// Closed-form bound per sweep value; vacuous denominators yield rows
// with an absent bound.
std::vector<SweepRow> run_upper_bound_sweep(const ExperimentConfig& c);

// Placement + phase search per sweep value; also evaluates the bound for
// the same parameters so the bound/achievable gap lands in one table.
std::vector<SweepRow> run_achievable_sweep(const ExperimentConfig& c);

struct PhaseOptResult {
    Deployment deployment; // seeded random grid deployment
    PhaseVector phases;
    double objective_value = 0.0;
};

// Optimize phases for one seeded random deployment of the configured
// scenario.
PhaseOptResult run_phase_opt(const ExperimentConfig& c);

struct PropertyResult {
    std::string property;
    bool passed = false;
    std::string detail; // counterexample dump on failure
};

// Cross-module property checks: the interference-term inequality chain,
// Monte-Carlo vs analytic SINR, and the exhaustive phase / placement
// oracle equivalences. Selection comes from c.properties.
std::vector<PropertyResult> run_validation_suite(const ExperimentConfig& c);

std::string format_csv_double(double v); // %.17g, lossless round-trip

void write_sweep_csv(std::ostream& os, ExperimentConfig::Axis axis,
                     const std::vector<SweepRow>& rows, bool search_columns);
void write_phases_csv(std::ostream& os, const PhaseOptResult& r);
void write_demo_csv(std::ostream& os, int element_count, const CancellationDemo& d);
void write_validation_csv(std::ostream& os, const std::vector<PropertyResult>& rows);

} // namespace reflectsim
