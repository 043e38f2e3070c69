#include "doctest.h"

#include "reflectsim/errors.hpp"
#include "reflectsim/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

using namespace reflectsim;

namespace {

std::string sweep_csv(ExperimentConfig::Axis axis, const std::vector<SweepRow>& rows,
                      bool search_columns) {
    std::ostringstream os;
    write_sweep_csv(os, axis, rows, search_columns);
    return os.str();
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("config parsing") {
    SUBCASE("empty text yields the documented defaults") {
        const ExperimentConfig c = parse_config("");
        CHECK(c == ExperimentConfig{});
        CHECK(c.edge_m == 10.0);
        CHECK(c.grid_divisions == 10);
        CHECK(c.pairs == 5);
        CHECK(c.arrays == 1);
        CHECK(c.elements_per_array == 48);
        CHECK(c.noise_dbm == -90.0);
        CHECK(c.beta_db == 5.0);
        CHECK(c.phase_levels == 360);
        CHECK(c.axis == ExperimentConfig::Axis::Pairs);
        CHECK(c.sweep_values == std::vector<double>{1, 2, 3, 4, 5});
        CHECK_FALSE(c.properties.has_value());
    }

    SUBCASE("values, comments and blank lines") {
        const ExperimentConfig c = parse_config(
            "# capacity experiment\n"
            "\n"
            "edge_m = 6.5\n"
            "pairs = 2          # inline comment\n"
            "noise_dbm = -90\n"
            "beta_db = 5\n"
            "sweep_axis = elements\n"
            "sweep_values = 0, 24, 48\n"
            "properties = chain, mc_sinr\n"
            "seed = 12345\n");
        CHECK(c.edge_m == 6.5);
        CHECK(c.pairs == 2);
        CHECK(c.axis == ExperimentConfig::Axis::Elements);
        CHECK(c.sweep_values == std::vector<double>{0, 24, 48});
        REQUIRE(c.properties.has_value());
        CHECK(*c.properties == std::vector<std::string>{"chain", "mc_sinr"});
        CHECK(c.seed == 12345);

        const LinkParams p = c.link_params();
        CHECK(p.noise_power_mw == doctest::Approx(1e-9).epsilon(1e-12));
        CHECK(p.sinr_threshold == doctest::Approx(3.16228).epsilon(1e-6));
        CHECK_NOTHROW(p.validate());
    }

    SUBCASE("an empty properties value selects nothing") {
        const ExperimentConfig c = parse_config("properties =\n");
        REQUIRE(c.properties.has_value());
        CHECK(c.properties->empty());
        CHECK(run_validation_suite(c).empty());
    }

    SUBCASE("unknown keys are rejected with the line number") {
        try {
            parse_config("edge_m = 10\nnonsense_key = 3\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(contains(e.what(), "line 2"));
            CHECK(contains(e.what(), "nonsense_key"));
        }
    }

    SUBCASE("duplicate keys are rejected") {
        try {
            parse_config("pairs = 2\npairs = 3\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(contains(e.what(), "line 2"));
            CHECK(contains(e.what(), "duplicate"));
        }
    }

    SUBCASE("missing separator is rejected") {
        CHECK_THROWS_AS(parse_config("edge_m 10\n"), ConfigError);
    }

    SUBCASE("malformed numbers carry the key name") {
        try {
            parse_config("edge_m = banana\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(contains(e.what(), "edge_m"));
        }
        CHECK_THROWS_AS(parse_config("pairs = 2.5\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("seed = -1\n"), ConfigError);
    }

    SUBCASE("invariant violations name the key") {
        try {
            parse_config("pairs = 0\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(contains(e.what(), "pairs"));
        }
        CHECK_THROWS_AS(parse_config("arrays = 5\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("sweep_axis = pairs\nsweep_values = 1.5\n"),
                        ConfigError);
        CHECK_THROWS_AS(parse_config("sweep_axis = arrays\nsweep_values = 9\n"),
                        ConfigError);
        CHECK_THROWS_AS(parse_config("d_min_m = 5\nd_max_m = 4\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("placement_mode = randomized\nsample_budget = 0\n"),
                        ConfigError);
        CHECK_THROWS_AS(parse_config("properties = chain, bogus\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("phase_method = newton\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("sweep_values =\n"), ConfigError);
    }

    SUBCASE("missing config file") {
        CHECK_THROWS_AS(load_config_file("/nonexistent/path.conf"), ConfigError);
    }
}

TEST_CASE("config serialization round-trips") {
    SUBCASE("defaults") {
        const ExperimentConfig c;
        CHECK(parse_config(serialize_config(c)) == c);
    }
    SUBCASE("fully populated config") {
        ExperimentConfig c;
        c.edge_m = 7.25;
        c.grid_divisions = 6;
        c.pairs = 3;
        c.arrays = 4;
        c.elements_per_array = 10;
        c.element_spacing_m = 0.05;
        c.carrier_hz = 5.8e9;
        c.alpha = 2.75;
        c.tx_power_mw = 2.5;
        c.noise_dbm = -63.5;
        c.beta_db = 7.75;
        c.rate_bps = 12500.0;
        c.d_min_m = 1.5;
        c.d_max_m = 19.25;
        c.axis = ExperimentConfig::Axis::Arrays;
        c.sweep_values = {0, 1, 2, 3, 4};
        c.phase_method = "exhaustive";
        c.phase_levels = 8;
        c.max_sweeps = 7;
        c.convergence_tol = 1e-7;
        c.restarts = 2;
        c.placement_mode = "randomized";
        c.sample_budget = 77;
        c.exhaustive_cap = 123456;
        c.objective = "single_link";
        c.objective_link = 1;
        c.chain_scenarios = 11;
        c.chain_tolerance_rel = 1e-8;
        c.mc_scenarios = 4;
        c.mc_symbols = 2048;
        c.mc_tolerance_db = 0.35;
        c.properties = std::vector<std::string>{"chain", "placement_oracle"};
        c.seed = 987654321;
        c.workers = 3;
        CHECK(parse_config(serialize_config(c)) == c);
    }
    SUBCASE("odd floating values survive the %.17g round trip") {
        ExperimentConfig c;
        c.edge_m = 0.1 + 0.2; // 0.30000000000000004
        c.alpha = 3.0000000000000004;
        CHECK(parse_config(serialize_config(c)) == c);
    }
}

TEST_CASE("csv double formatting") {
    CHECK(format_csv_double(1.0) == "1");
    CHECK(format_csv_double(0.1) == "0.10000000000000001");
    CHECK(format_csv_double(-2.5) == "-2.5");
    std::uint64_t state = 11;
    for (int i = 0; i < 200; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const double x = (static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5) *
                         std::pow(10.0, static_cast<int>(state % 21) - 10);
        const std::string s = format_csv_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
}

TEST_CASE("upper-bound sweeps") {
    SUBCASE("dense default arrays render INVALID markers") {
        const ExperimentConfig c = parse_config(""); // faithful defaults
        const auto rows = run_upper_bound_sweep(c);
        REQUIRE(rows.size() == 5);
        for (const auto& r : rows) CHECK_FALSE(r.upper_bound.has_value());
        const std::string csv = sweep_csv(c.axis, rows, false);
        CHECK(contains(csv, "sweep_axis,sweep_value,upper_bound\n"));
        CHECK(contains(csv, "pairs,1,INVALID\n"));
        CHECK(contains(csv, "pairs,5,INVALID\n"));
    }

    SUBCASE("reflector-free bound reproduces the closed-form value") {
        const ExperimentConfig c = parse_config(
            "elements_per_array = 0\nsweep_axis = pairs\nsweep_values = 5\n");
        const auto rows = run_upper_bound_sweep(c);
        REQUIRE(rows.size() == 1);
        REQUIRE(rows[0].upper_bound.has_value());
        CHECK(*rows[0].upper_bound ==
              doctest::Approx(13781753577.175491).epsilon(1e-12));
        CHECK(*rows[0].upper_bound == doctest::Approx(1.378e10).epsilon(1e-3));
    }

    SUBCASE("element sweep grows strictly in a valid regime") {
        const ExperimentConfig c = parse_config(
            "noise_dbm = -3\nd_min_m = 5\nsweep_axis = elements\n"
            "sweep_values = 24, 36, 48\n");
        const auto rows = run_upper_bound_sweep(c);
        REQUIRE(rows.size() == 3);
        double prev = 0.0;
        for (const auto& r : rows) {
            REQUIRE(r.upper_bound.has_value());
            CHECK(*r.upper_bound > prev);
            prev = *r.upper_bound;
        }
    }

    SUBCASE("edge sweep grows with the room in a valid regime") {
        const ExperimentConfig c = parse_config(
            "noise_dbm = -3\nd_min_m = 5\nelements_per_array = 24\n"
            "sweep_axis = edge\nsweep_values = 5, 6, 7, 8, 9, 10\n");
        const auto rows = run_upper_bound_sweep(c);
        REQUIRE(rows.size() == 6);
        double prev = 0.0;
        for (const auto& r : rows) {
            REQUIRE(r.upper_bound.has_value());
            CHECK(*r.upper_bound > prev);
            prev = *r.upper_bound;
        }
    }
}

TEST_CASE("achievable sweep on a desk-scale grid") {
    const ExperimentConfig c = parse_config(
        "grid_divisions = 1\npairs = 1\nelements_per_array = 0\n"
        "sweep_axis = pairs\nsweep_values = 1\nphase_levels = 4\nmax_sweeps = 2\n");
    const auto rows = run_achievable_sweep(c);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].achievable.has_value());
    CHECK(*rows[0].achievable == doctest::Approx(2.8284271247461903e8).epsilon(1e-12));
    CHECK(rows[0].statuses_evaluated == 12);
    REQUIRE(rows[0].upper_bound.has_value());
    CHECK(*rows[0].achievable <= *rows[0].upper_bound);

    SUBCASE("rows are deterministic across repeated runs") {
        const auto again = run_achievable_sweep(c);
        CHECK(sweep_csv(c.axis, again, true) == sweep_csv(c.axis, rows, true));
    }
    SUBCASE("csv layout carries the search columns") {
        const std::string csv = sweep_csv(c.axis, rows, true);
        CHECK(contains(csv,
                       "sweep_axis,sweep_value,upper_bound,achievable_capacity,"
                       "statuses_evaluated\n"));
        CHECK(contains(csv, ",282842712.47461903,12\n"));
    }
}

TEST_CASE("phase-opt run uses the seeded deployment and objective") {
    const ExperimentConfig c = parse_config(
        "pairs = 2\nelements_per_array = 6\nphase_levels = 24\nmax_sweeps = 4\n"
        "objective = single_link\nobjective_link = 0\nseed = 3\n");
    const PhaseOptResult r = run_phase_opt(c);
    CHECK(r.deployment.pairs() == 2);
    CHECK(r.phases.phases.size() == 6);
    CHECK(r.objective_value > 0.0);

    // Same config, same result; different seed, different deployment.
    const PhaseOptResult again = run_phase_opt(c);
    CHECK(again.deployment == r.deployment);
    CHECK(again.objective_value == r.objective_value);
    CHECK(again.phases.phases == r.phases.phases);

    ExperimentConfig other = c;
    other.seed = 4;
    const PhaseOptResult moved = run_phase_opt(other);
    CHECK_FALSE(moved.deployment == r.deployment);

    SUBCASE("objective link must stay below the pair count") {
        ExperimentConfig bad = c;
        bad.objective_link = 2;
        CHECK_THROWS_AS(run_phase_opt(bad), ConfigError);
    }
    SUBCASE("phases csv lists one row per element") {
        std::ostringstream os;
        write_phases_csv(os, r);
        const std::string csv = os.str();
        CHECK(contains(csv, "element,phase_rad\n"));
        CHECK(contains(csv, "\n5,"));
        CHECK_FALSE(contains(csv, "\n6,"));
    }
}

TEST_CASE("validation suite") {
    SUBCASE("full suite passes on a reduced but meaningful budget") {
        const ExperimentConfig c = parse_config(
            "chain_scenarios = 120\nmc_scenarios = 4\nmc_symbols = 20000\n");
        const auto results = run_validation_suite(c);
        REQUIRE(results.size() == 4);
        for (const auto& r : results) {
            CAPTURE(r.property);
            CAPTURE(r.detail);
            CHECK(r.passed);
        }
        std::ostringstream os;
        write_validation_csv(os, results);
        const std::string csv = os.str();
        CHECK(contains(csv, "property,passed,detail\n"));
        CHECK(contains(csv, "chain,true,"));
        CHECK(contains(csv, "mc_sinr,true,"));
        CHECK(contains(csv, "phase_oracle,true,"));
        CHECK(contains(csv, "placement_oracle,true,"));
    }

    SUBCASE("a zero Monte-Carlo tolerance produces a counterexample") {
        const ExperimentConfig c = parse_config(
            "properties = mc_sinr\nmc_scenarios = 2\nmc_symbols = 1000\n"
            "mc_tolerance_db = 0\n");
        const auto results = run_validation_suite(c);
        REQUIRE(results.size() == 1);
        CHECK_FALSE(results[0].passed);
        CHECK(contains(results[0].detail, "dB"));
        std::ostringstream os;
        write_validation_csv(os, results);
        CHECK(contains(os.str(), "mc_sinr,false,"));
    }

    SUBCASE("selection picks individual properties") {
        const ExperimentConfig c = parse_config(
            "properties = placement_oracle\nphase_levels = 8\n");
        const auto results = run_validation_suite(c);
        REQUIRE(results.size() == 1);
        CHECK(results[0].property == "placement_oracle");
        CHECK(results[0].passed);
    }

    SUBCASE("csv detail text is sanitized") {
        std::vector<PropertyResult> rows{{"chain", false, "a,b\nc\"d"}};
        std::ostringstream os;
        write_validation_csv(os, rows);
        CHECK(contains(os.str(), "chain,false,a;b;c;d\n"));
    }
}

TEST_CASE("demo csv layout") {
    CancellationDemo d{0.25, 40.5};
    std::ostringstream os;
    write_demo_csv(os, 16, d);
    CHECK(os.str() ==
          "elements,baseline_sinr_db,optimized_sinr_db,improvement_db\n"
          "16,0.25,40.5,40.25\n");
}
