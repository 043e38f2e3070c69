#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reflectsim/errors.hpp"
#include "reflectsim/experiments.hpp"

using namespace reflectsim;

namespace {

// CSV goes to stdout unless --out is given; either way the bytes come
// from one pre-rendered buffer so both paths emit identical output.
int emit(const std::string& bytes, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << bytes << std::flush;
        return std::cout ? 0 : 2;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        std::cerr << "cannot open output file: " << out_path << "\n";
        return 2;
    }
    f << bytes << std::flush;
    return f ? 0 : 2;
}

void describe_rows(const std::vector<SweepRow>& rows) {
    double total = 0.0;
    for (const auto& r : rows) total += r.wall_time_s;
    std::cerr << rows.size() << " sweep row(s), " << total << " s total\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"smart reflect-array spectrum sharing simulator"};
    app.require_subcommand(1);

    struct SubCmd {
        CLI::App* cmd = nullptr;
        std::string name;
        std::string config_path;
        std::string out_path;
        std::uint64_t seed = 0;
        int workers = 1;
    };
    const std::vector<std::pair<std::string, std::string>> defs = {
        {"upper-bound", "closed-form transport capacity bound per sweep value"},
        {"achievable", "placement + phase search per sweep value"},
        {"phase-opt", "optimize phases for one seeded random deployment"},
        {"demo-cancel", "two-transmitter interference cancellation demo"},
        {"validate", "cross-module property suite"},
    };
    std::vector<SubCmd> subs(defs.size());
    for (size_t i = 0; i < defs.size(); ++i) {
        subs[i].name = defs[i].first;
        subs[i].cmd = app.add_subcommand(defs[i].first, defs[i].second);
        subs[i].cmd->add_option("--config", subs[i].config_path, "experiment config file");
        subs[i].cmd->add_option("--seed", subs[i].seed, "override the config seed");
        subs[i].cmd->add_option("--workers", subs[i].workers, "override the worker count");
        subs[i].cmd->add_option("--out", subs[i].out_path, "write CSV here instead of stdout");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    SubCmd* active = nullptr;
    for (auto& s : subs)
        if (s.cmd->parsed()) active = &s;

    try {
        ExperimentConfig cfg = active->config_path.empty()
                                   ? ExperimentConfig{}
                                   : load_config_file(active->config_path);
        if (active->cmd->count("--seed")) cfg.seed = active->seed;
        if (active->cmd->count("--workers")) cfg.workers = active->workers;
        if (cfg.workers < 1) throw ConfigError("workers must be >= 1");

        std::ostringstream csv;
        int rc = 0;
        if (active->name == "upper-bound") {
            const auto rows = run_upper_bound_sweep(cfg);
            write_sweep_csv(csv, cfg.axis, rows, false);
            describe_rows(rows);
        } else if (active->name == "achievable") {
            const auto rows = run_achievable_sweep(cfg);
            write_sweep_csv(csv, cfg.axis, rows, true);
            describe_rows(rows);
        } else if (active->name == "phase-opt") {
            const auto r = run_phase_opt(cfg);
            write_phases_csv(csv, r);
            std::cerr << "objective " << cfg.objective << " reached "
                      << format_csv_double(r.objective_value) << " over "
                      << r.phases.phases.size() << " element phase(s)\n";
        } else if (active->name == "demo-cancel") {
            const auto demo = interference_cancellation_demo(cfg.elements_per_array,
                                                             cfg.phase_config());
            write_demo_csv(csv, cfg.elements_per_array, demo);
            std::cerr << "baseline " << demo.baseline_sinr_db << " dB, optimized "
                      << demo.optimized_sinr_db << " dB\n";
        } else { // validate
            const auto rows = run_validation_suite(cfg);
            write_validation_csv(csv, rows);
            int passed = 0;
            for (const auto& r : rows)
                if (r.passed) ++passed;
            if (passed != int(rows.size())) rc = 1;
            std::cerr << passed << "/" << rows.size() << " properties passed\n";
        }
        const int emit_rc = emit(csv.str(), active->out_path);
        return emit_rc != 0 ? emit_rc : rc;
    } catch (const BudgetExceededError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
