#include "reflectsim/experiments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "reflectsim/errors.hpp"

namespace reflectsim {

namespace {

std::string trim(const std::string& s) {
    const size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_line(int line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, const std::string& key, int line) {
    size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (...) {
        pos = std::string::npos;
    }
    if (pos != v.size() || v.empty() || !std::isfinite(d))
        bad_line(line, "key '" + key + "' needs a finite number, got '" + v + "'");
    return d;
}

long long to_int(const std::string& v, const std::string& key, int line) {
    size_t pos = 0;
    long long i = 0;
    try {
        i = std::stoll(v, &pos);
    } catch (...) {
        pos = std::string::npos;
    }
    if (pos != v.size() || v.empty())
        bad_line(line, "key '" + key + "' needs an integer, got '" + v + "'");
    return i;
}

std::uint64_t to_u64(const std::string& v, const std::string& key, int line) {
    size_t pos = 0;
    unsigned long long u = 0;
    try {
        if (!v.empty() && v[0] == '-') throw std::invalid_argument("");
        u = std::stoull(v, &pos);
    } catch (...) {
        pos = std::string::npos;
    }
    if (pos != v.size() || v.empty())
        bad_line(line, "key '" + key + "' needs a non-negative integer, got '" + v + "'");
    return u;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(v);
    while (std::getline(ss, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

[[noreturn]] void bad_key(const std::string& key, const std::string& msg) {
    throw ConfigError("key '" + key + "': " + msg);
}

void apply_key(ExperimentConfig& c, const std::string& key,
               const std::string& value, int line) {
    if (key == "edge_m") c.edge_m = to_double(value, key, line);
    else if (key == "grid_divisions") c.grid_divisions = int(to_int(value, key, line));
    else if (key == "pairs") c.pairs = int(to_int(value, key, line));
    else if (key == "arrays") c.arrays = int(to_int(value, key, line));
    else if (key == "elements_per_array") c.elements_per_array = int(to_int(value, key, line));
    else if (key == "element_spacing_m") c.element_spacing_m = to_double(value, key, line);
    else if (key == "carrier_hz") c.carrier_hz = to_double(value, key, line);
    else if (key == "alpha") c.alpha = to_double(value, key, line);
    else if (key == "tx_power_mw") c.tx_power_mw = to_double(value, key, line);
    else if (key == "noise_dbm") c.noise_dbm = to_double(value, key, line);
    else if (key == "beta_db") c.beta_db = to_double(value, key, line);
    else if (key == "rate_bps") c.rate_bps = to_double(value, key, line);
    else if (key == "d_min_m") c.d_min_m = to_double(value, key, line);
    else if (key == "d_max_m") c.d_max_m = to_double(value, key, line);
    else if (key == "sweep_axis") {
        if (value == "pairs") c.axis = ExperimentConfig::Axis::Pairs;
        else if (value == "edge") c.axis = ExperimentConfig::Axis::Edge;
        else if (value == "elements") c.axis = ExperimentConfig::Axis::Elements;
        else if (value == "arrays") c.axis = ExperimentConfig::Axis::Arrays;
        else bad_line(line, "sweep_axis must be pairs, edge, elements or arrays");
    } else if (key == "sweep_values") {
        c.sweep_values.clear();
        for (const auto& item : split_list(value))
            c.sweep_values.push_back(to_double(item, key, line));
    } else if (key == "phase_method") {
        if (value != "coordinate_ascent" && value != "exhaustive")
            bad_line(line, "phase_method must be coordinate_ascent or exhaustive");
        c.phase_method = value;
    } else if (key == "phase_levels") c.phase_levels = int(to_int(value, key, line));
    else if (key == "max_sweeps") c.max_sweeps = int(to_int(value, key, line));
    else if (key == "convergence_tol") c.convergence_tol = to_double(value, key, line);
    else if (key == "restarts") c.restarts = int(to_int(value, key, line));
    else if (key == "placement_mode") {
        if (value != "exhaustive" && value != "randomized")
            bad_line(line, "placement_mode must be exhaustive or randomized");
        c.placement_mode = value;
    } else if (key == "sample_budget") c.sample_budget = to_u64(value, key, line);
    else if (key == "exhaustive_cap") c.exhaustive_cap = to_u64(value, key, line);
    else if (key == "objective") {
        if (value != "transport" && value != "min_sinr" && value != "single_link")
            bad_line(line, "objective must be transport, min_sinr or single_link");
        c.objective = value;
    } else if (key == "objective_link") c.objective_link = int(to_int(value, key, line));
    else if (key == "chain_scenarios") c.chain_scenarios = int(to_int(value, key, line));
    else if (key == "chain_tolerance_rel") c.chain_tolerance_rel = to_double(value, key, line);
    else if (key == "mc_scenarios") c.mc_scenarios = int(to_int(value, key, line));
    else if (key == "mc_symbols") c.mc_symbols = to_u64(value, key, line);
    else if (key == "mc_tolerance_db") c.mc_tolerance_db = to_double(value, key, line);
    else if (key == "properties") c.properties = split_list(value);
    else if (key == "seed") c.seed = to_u64(value, key, line);
    else if (key == "workers") c.workers = int(to_int(value, key, line));
    else bad_line(line, "unknown key '" + key + "'");
}

void check_config(const ExperimentConfig& c) {
    if (!(c.edge_m > 0.0)) bad_key("edge_m", "must be positive");
    if (c.grid_divisions < 1) bad_key("grid_divisions", "must be >= 1");
    if (c.pairs < 1) bad_key("pairs", "must be >= 1");
    if (c.arrays < 0 || c.arrays > 4) bad_key("arrays", "must be between 0 and 4");
    if (c.elements_per_array < 0) bad_key("elements_per_array", "must be >= 0");
    if (!(c.element_spacing_m > 0.0)) bad_key("element_spacing_m", "must be positive");
    if (!(c.carrier_hz > 0.0)) bad_key("carrier_hz", "must be positive");
    if (!(c.alpha > 0.0)) bad_key("alpha", "must be positive");
    if (!(c.tx_power_mw > 0.0)) bad_key("tx_power_mw", "must be positive");
    if (!(c.rate_bps > 0.0)) bad_key("rate_bps", "must be positive");
    if (c.d_min_m && !(*c.d_min_m > 0.0)) bad_key("d_min_m", "must be positive");
    if (c.d_max_m && !(*c.d_max_m > 0.0)) bad_key("d_max_m", "must be positive");
    if (c.d_min_m && c.d_max_m && !(*c.d_min_m < *c.d_max_m))
        bad_key("d_min_m", "must be smaller than d_max_m");
    if (c.sweep_values.empty()) bad_key("sweep_values", "must not be empty");
    for (double v : c.sweep_values) {
        const bool integral = v == double(std::llround(v));
        switch (c.axis) {
            case ExperimentConfig::Axis::Pairs:
                if (!integral || v < 1) bad_key("sweep_values", "pairs values must be integers >= 1");
                break;
            case ExperimentConfig::Axis::Edge:
                if (!(v > 0.0)) bad_key("sweep_values", "edge values must be positive");
                break;
            case ExperimentConfig::Axis::Elements:
                if (!integral || v < 0) bad_key("sweep_values", "element counts must be integers >= 0");
                break;
            case ExperimentConfig::Axis::Arrays:
                if (!integral || v < 0 || v > 4)
                    bad_key("sweep_values", "array counts must be integers in 0..4");
                break;
        }
    }
    if (c.phase_levels < 1) bad_key("phase_levels", "must be >= 1");
    if (c.max_sweeps < 1) bad_key("max_sweeps", "must be >= 1");
    if (c.convergence_tol < 0.0) bad_key("convergence_tol", "must be >= 0");
    if (c.restarts < 0) bad_key("restarts", "must be >= 0");
    if (c.placement_mode == "randomized" && c.sample_budget < 1)
        bad_key("sample_budget", "must be >= 1 in randomized mode");
    if (c.exhaustive_cap < 1) bad_key("exhaustive_cap", "must be >= 1");
    if (c.objective_link < 0) bad_key("objective_link", "must be >= 0");
    if (c.chain_scenarios < 0) bad_key("chain_scenarios", "must be >= 0");
    if (c.chain_tolerance_rel < 0.0) bad_key("chain_tolerance_rel", "must be >= 0");
    if (c.mc_scenarios < 0) bad_key("mc_scenarios", "must be >= 0");
    if (c.mc_symbols < 1) bad_key("mc_symbols", "must be >= 1");
    if (c.mc_tolerance_db < 0.0) bad_key("mc_tolerance_db", "must be >= 0");
    if (c.workers < 1) bad_key("workers", "must be >= 1");
    if (c.properties)
        for (const auto& p : *c.properties)
            if (p != "chain" && p != "mc_sinr" && p != "phase_oracle" && p != "placement_oracle")
                bad_key("properties", "unknown property '" + p + "'");
}

// unbiased uniform draw from [0, bound)
std::uint64_t draw_below(std::mt19937_64& eng, std::uint64_t bound) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;
    std::uint64_t x;
    do {
        x = eng();
    } while (x >= limit);
    return x % bound;
}

} // namespace

LinkParams ExperimentConfig::link_params() const {
    return make_link_params(carrier_hz, alpha, tx_power_mw, dbm_to_mw(noise_dbm),
                            db_to_linear(beta_db), rate_bps);
}

Room ExperimentConfig::make_room() const { return Room(edge_m, grid_divisions); }

std::vector<ArrayLayout> ExperimentConfig::make_layouts() const {
    std::vector<ArrayLayout> out;
    if (elements_per_array == 0) return out;
    const Room room = make_room();
    for (int j = 0; j < arrays; ++j)
        out.push_back(midwall_layout(room, j, elements_per_array, element_spacing_m));
    return out;
}

PhaseSearchConfig ExperimentConfig::phase_config() const {
    PhaseSearchConfig p;
    p.method = phase_method == "exhaustive" ? PhaseMethod::Exhaustive
                                            : PhaseMethod::CoordinateAscent;
    p.phase_step = 2.0 * 3.141592653589793238462643383279502884 / phase_levels;
    p.max_sweeps = max_sweeps;
    p.convergence_tol = convergence_tol;
    p.seed = seed;
    p.restarts = restarts;
    return p;
}

PlacementSearchConfig ExperimentConfig::placement_config() const {
    PlacementSearchConfig p;
    p.mode = placement_mode == "randomized" ? PlacementSearchConfig::Mode::Randomized
                                            : PlacementSearchConfig::Mode::Exhaustive;
    p.sample_budget = sample_budget;
    p.seed = seed;
    p.parallel_workers = workers;
    p.exhaustive_cap = exhaustive_cap;
    return p;
}

const char* axis_name(ExperimentConfig::Axis axis) {
    switch (axis) {
        case ExperimentConfig::Axis::Pairs: return "pairs";
        case ExperimentConfig::Axis::Edge: return "edge";
        case ExperimentConfig::Axis::Elements: return "elements";
        case ExperimentConfig::Axis::Arrays: return "arrays";
    }
    return "?";
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) bad_line(lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) bad_line(lineno, "missing key before '='");
        if (!seen.insert(key).second) bad_line(lineno, "duplicate key '" + key + "'");
        apply_key(c, key, value, lineno);
    }
    check_config(c);
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string format_csv_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream os;
    auto num = [&](const char* key, double v) { os << key << " = " << format_csv_double(v) << "\n"; };
    auto integer = [&](const char* key, long long v) { os << key << " = " << v << "\n"; };
    auto text = [&](const char* key, const std::string& v) { os << key << " = " << v << "\n"; };
    num("edge_m", c.edge_m);
    integer("grid_divisions", c.grid_divisions);
    integer("pairs", c.pairs);
    integer("arrays", c.arrays);
    integer("elements_per_array", c.elements_per_array);
    num("element_spacing_m", c.element_spacing_m);
    num("carrier_hz", c.carrier_hz);
    num("alpha", c.alpha);
    num("tx_power_mw", c.tx_power_mw);
    num("noise_dbm", c.noise_dbm);
    num("beta_db", c.beta_db);
    num("rate_bps", c.rate_bps);
    if (c.d_min_m) num("d_min_m", *c.d_min_m);
    if (c.d_max_m) num("d_max_m", *c.d_max_m);
    text("sweep_axis", axis_name(c.axis));
    {
        std::string joined;
        for (size_t i = 0; i < c.sweep_values.size(); ++i) {
            if (i) joined += ", ";
            joined += format_csv_double(c.sweep_values[i]);
        }
        text("sweep_values", joined);
    }
    text("phase_method", c.phase_method);
    integer("phase_levels", c.phase_levels);
    integer("max_sweeps", c.max_sweeps);
    num("convergence_tol", c.convergence_tol);
    integer("restarts", c.restarts);
    text("placement_mode", c.placement_mode);
    integer("sample_budget", (long long)c.sample_budget);
    integer("exhaustive_cap", (long long)c.exhaustive_cap);
    text("objective", c.objective);
    integer("objective_link", c.objective_link);
    integer("chain_scenarios", c.chain_scenarios);
    num("chain_tolerance_rel", c.chain_tolerance_rel);
    integer("mc_scenarios", c.mc_scenarios);
    integer("mc_symbols", (long long)c.mc_symbols);
    num("mc_tolerance_db", c.mc_tolerance_db);
    if (c.properties) {
        std::string joined;
        for (size_t i = 0; i < c.properties->size(); ++i) {
            if (i) joined += ", ";
            joined += (*c.properties)[i];
        }
        text("properties", joined);
    }
    integer("seed", (long long)c.seed);
    integer("workers", c.workers);
    return os.str();
}

namespace {

struct SweepPoint {
    Room room;
    std::vector<ArrayLayout> layouts;
    int pairs = 0;
    LinkParams params;
    int pooled = 0;
};

SweepPoint resolve_point(const ExperimentConfig& c, double v) {
    ExperimentConfig t = c;
    switch (c.axis) {
        case ExperimentConfig::Axis::Pairs: t.pairs = int(std::llround(v)); break;
        case ExperimentConfig::Axis::Edge: t.edge_m = v; break;
        case ExperimentConfig::Axis::Elements: t.elements_per_array = int(std::llround(v)); break;
        case ExperimentConfig::Axis::Arrays: t.arrays = int(std::llround(v)); break;
    }
    SweepPoint p{t.make_room(), t.make_layouts(), t.pairs, t.link_params(), 0};
    for (const auto& l : p.layouts) p.pooled += l.element_count;
    return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

std::vector<SweepRow> run_upper_bound_sweep(const ExperimentConfig& c) {
    std::vector<SweepRow> rows;
    for (double v : c.sweep_values) {
        const auto t0 = std::chrono::steady_clock::now();
        const SweepPoint p = resolve_point(c, v);
        const auto [d_min, d_max] = distance_extremes(p.room, p.layouts, c.d_min_m, c.d_max_m);
        SweepRow r;
        r.sweep_value = v;
        try {
            r.upper_bound = upper_bound(p.params, p.pairs, p.pooled, d_min, d_max);
        } catch (const BoundInvalidError&) {
        }
        r.wall_time_s = seconds_since(t0);
        rows.push_back(r);
    }
    return rows;
}

std::vector<SweepRow> run_achievable_sweep(const ExperimentConfig& c) {
    std::vector<SweepRow> rows;
    for (size_t i = 0; i < c.sweep_values.size(); ++i) {
        const double v = c.sweep_values[i];
        const auto t0 = std::chrono::steady_clock::now();
        const SweepPoint p = resolve_point(c, v);
        PhaseSearchConfig phase_cfg = c.phase_config();
        phase_cfg.seed = substream_seed(c.seed, 8, i);
        PlacementSearchConfig place_cfg = c.placement_config();
        place_cfg.seed = substream_seed(c.seed, 7, i);
        const SearchResult res = search_placements(p.room, p.layouts, p.pairs,
                                                   p.params, phase_cfg, place_cfg);
        SweepRow r;
        r.sweep_value = v;
        r.achievable = res.best_capacity;
        r.statuses_evaluated = res.statuses_evaluated;
        const auto [d_min, d_max] = distance_extremes(p.room, p.layouts, c.d_min_m, c.d_max_m);
        try {
            r.upper_bound = upper_bound(p.params, p.pairs, p.pooled, d_min, d_max);
        } catch (const BoundInvalidError&) {
        }
        r.wall_time_s = seconds_since(t0);
        rows.push_back(r);
    }
    return rows;
}

PhaseOptResult run_phase_opt(const ExperimentConfig& c) {
    const Room room = c.make_room();
    const auto layouts = c.make_layouts();
    const LinkParams params = c.link_params();
    std::vector<Point2D> elements;
    for (const auto& l : layouts) {
        auto pts = element_positions(room, l);
        elements.insert(elements.end(), pts.begin(), pts.end());
    }

    const std::int64_t grid_points = room.grid_point_count();
    if (grid_points < 2 * c.pairs)
        throw ConfigError("grid too small for the requested pairs");
    std::mt19937_64 eng(substream_seed(c.seed, 6, 0));
    std::vector<Point2D> chosen;
    while (int(chosen.size()) < 2 * c.pairs) {
        const std::uint64_t idx = draw_below(eng, std::uint64_t(grid_points));
        const int per_axis = room.points_per_axis();
        const Point2D pt = room.grid_point(int(idx % per_axis), int(idx / per_axis));
        bool taken = false;
        for (const auto& q : chosen) taken = taken || q == pt;
        for (const auto& q : elements) taken = taken || q == pt;
        if (!taken) chosen.push_back(pt);
    }

    Scenario s;
    s.room = room;
    s.layouts = layouts;
    s.deployment.tx_positions.assign(chosen.begin(), chosen.begin() + c.pairs);
    s.deployment.rx_positions.assign(chosen.begin() + c.pairs, chosen.end());
    s.params = params;

    Objective obj = Objective::transport();
    if (c.objective == "min_sinr") obj = Objective::min_sinr();
    if (c.objective == "single_link") {
        if (c.objective_link >= c.pairs)
            throw ConfigError("objective_link must be below pairs");
        obj = Objective::single_link(c.objective_link);
    }
    const auto [phases, value] = optimize_phases(s, obj, c.phase_config());
    return PhaseOptResult{s.deployment, phases, value};
}

namespace {

// random grid deployment avoiding reflector element positions
Deployment random_deployment(std::mt19937_64& eng, const Room& room, int pairs,
                             const std::vector<Point2D>& elements) {
    std::vector<Point2D> chosen;
    while (int(chosen.size()) < 2 * pairs) {
        const std::uint64_t idx = draw_below(eng, std::uint64_t(room.grid_point_count()));
        const int per_axis = room.points_per_axis();
        const Point2D pt = room.grid_point(int(idx % per_axis), int(idx / per_axis));
        bool taken = false;
        for (const auto& q : chosen) taken = taken || q == pt;
        for (const auto& q : elements) taken = taken || q == pt;
        if (!taken) chosen.push_back(pt);
    }
    Deployment d;
    d.tx_positions.assign(chosen.begin(), chosen.begin() + pairs);
    d.rx_positions.assign(chosen.begin() + pairs, chosen.end());
    return d;
}

Scenario random_scenario(std::mt19937_64& eng, int max_pairs, int max_elements,
                         bool fixed_elements = false) {
    Scenario s;
    s.room = Room(10.0, 10);
    const int pairs = 1 + int(eng() % std::uint64_t(max_pairs));
    const int n = fixed_elements ? max_elements : int(eng() % std::uint64_t(max_elements + 1));
    if (n > 0) s.layouts.push_back(midwall_layout(s.room, 0, n, 0.0625));
    std::vector<Point2D> elements;
    for (const auto& l : s.layouts) {
        auto pts = element_positions(s.room, l);
        elements.insert(elements.end(), pts.begin(), pts.end());
    }
    s.deployment = random_deployment(eng, s.room, pairs, elements);
    s.params = LinkParams{};
    return s;
}

PhaseVector random_phases(std::mt19937_64& eng, int n) {
    constexpr double kPi = 3.141592653589793238462643383279502884;
    PhaseVector v;
    v.phases.reserve(n);
    for (int i = 0; i < n; ++i)
        v.phases.push_back(-kPi + double(eng() >> 11) * 0x1.0p-53 * 2.0 * kPi);
    return v;
}

std::string summarize_scenario(const Scenario& s, std::uint64_t index) {
    std::ostringstream os;
    os << "scenario " << index << " (pairs=" << s.pairs()
       << " elements=" << s.pooled_element_count() << ")";
    return os.str();
}

PropertyResult check_chain(const ExperimentConfig& c) {
    PropertyResult r{"chain", true, ""};
    std::mt19937_64 eng(substream_seed(c.seed, 9, 0));
    for (int t = 0; t < c.chain_scenarios; ++t) {
        const Scenario s = random_scenario(eng, 4, 16);
        const PhaseVector ph = random_phases(eng, s.pooled_element_count());
        const int l = int(eng() % std::uint64_t(s.pairs()));
        const BoundTerms bt = bound_terms(s, ph, l);
        const double tol = c.chain_tolerance_rel;
        const double slack1 = tol * std::max(std::abs(bt.I), std::abs(bt.I_lb_am_gm));
        const double slack2 = tol * std::max(std::abs(bt.I_lb_am_gm), std::abs(bt.I_lb_trig));
        if (bt.I_lb_am_gm > bt.I + slack1 || bt.I_lb_trig > bt.I_lb_am_gm + slack2) {
            r.passed = false;
            std::ostringstream os;
            os << summarize_scenario(s, t) << " link " << l << ": I=" << format_csv_double(bt.I)
               << " am_gm=" << format_csv_double(bt.I_lb_am_gm)
               << " trig=" << format_csv_double(bt.I_lb_trig);
            r.detail = os.str();
            return r;
        }
    }
    r.detail = std::to_string(c.chain_scenarios) + " scenarios checked";
    return r;
}

PropertyResult check_mc_sinr(const ExperimentConfig& c) {
    PropertyResult r{"mc_sinr", true, ""};
    std::mt19937_64 eng(substream_seed(c.seed, 10, 0));
    for (int t = 0; t < c.mc_scenarios; ++t) {
        const Scenario s = random_scenario(eng, 3, 8);
        const PhaseVector ph = random_phases(eng, s.pooled_element_count());
        const auto analytic = sinr_all(s, ph);
        const auto empirical = simulate_received(s, ph, c.mc_symbols,
                                                 substream_seed(c.seed, 11, t));
        for (int l = 0; l < s.pairs(); ++l) {
            const double diff = std::abs(linear_to_db(empirical[l].sinr) -
                                         linear_to_db(analytic[l]));
            if (!(diff <= c.mc_tolerance_db)) {
                r.passed = false;
                std::ostringstream os;
                os << summarize_scenario(s, t) << " link " << l << ": analytic "
                   << format_csv_double(linear_to_db(analytic[l])) << " dB vs empirical "
                   << format_csv_double(linear_to_db(empirical[l].sinr)) << " dB ("
                   << format_csv_double(diff) << " dB apart; tolerance "
                   << format_csv_double(c.mc_tolerance_db) << ")";
                r.detail = os.str();
                return r;
            }
        }
    }
    r.detail = std::to_string(c.mc_scenarios) + " scenarios checked";
    return r;
}

PropertyResult check_phase_oracle(const ExperimentConfig& c) {
    constexpr double kPi = 3.141592653589793238462643383279502884;
    PropertyResult r{"phase_oracle", true, ""};
    std::mt19937_64 eng(substream_seed(c.seed, 12, 0));
    PhaseSearchConfig joint;
    joint.method = PhaseMethod::Exhaustive;
    joint.phase_step = kPi / 4.0;
    for (int t = 0; t < 10; ++t) {
        const Scenario s = random_scenario(eng, 2, 2, /*fixed_elements=*/true);
        const auto exhaustive = optimize_phases(s, Objective::transport(), joint);

        // independent joint-grid scan through the public evaluators
        std::pair<double, double> best{-1.0, 0.0};
        std::vector<double> best_ph;
        for (int v1 = 0; v1 < 8; ++v1)
            for (int v2 = 0; v2 < 8; ++v2) {
                PhaseVector ph;
                ph.phases = {-kPi + v1 * joint.phase_step, -kPi + v2 * joint.phase_step};
                const CapacityReport rep = transport_capacity(s, ph);
                double min_sinr = std::numeric_limits<double>::infinity();
                for (double x : rep.per_link_sinr) min_sinr = std::min(min_sinr, x);
                const std::pair<double, double> sc{rep.transport_capacity, min_sinr};
                if (sc > best) {
                    best = sc;
                    best_ph = ph.phases;
                }
            }

        if (exhaustive.second != best.first || exhaustive.first.phases != best_ph) {
            r.passed = false;
            std::ostringstream os;
            os << summarize_scenario(s, t) << ": exhaustive "
               << format_csv_double(exhaustive.second) << " vs oracle "
               << format_csv_double(best.first);
            r.detail = os.str();
            return r;
        }
    }
    r.detail = "10 scenarios checked";
    return r;
}

PropertyResult check_placement_oracle(const ExperimentConfig& c) {
    PropertyResult r{"placement_oracle", true, ""};
    const Room room(10.0, 1);
    const std::vector<ArrayLayout> layouts; // no reflectors
    const LinkParams params;
    PhaseSearchConfig phase_cfg;
    phase_cfg.seed = c.seed;
    PlacementSearchConfig place_cfg;
    place_cfg.mode = PlacementSearchConfig::Mode::Exhaustive;
    const SearchResult res = search_placements(room, layouts, 1, params,
                                               phase_cfg, place_cfg);

    // independent brute force over the 12 ordered point pairs, visiting
    // them in the enumeration's interleaved (x1,x2,y1,y2) order
    struct Candidate {
        std::array<double, 4> key;
        Deployment dep;
    };
    std::vector<Candidate> all;
    for (int ax = 0; ax <= 1; ++ax)
        for (int ay = 0; ay <= 1; ++ay)
            for (int bx = 0; bx <= 1; ++bx)
                for (int by = 0; by <= 1; ++by) {
                    if (ax == bx && ay == by) continue;
                    const Point2D a = room.grid_point(ax, ay);
                    const Point2D b = room.grid_point(bx, by);
                    all.push_back({{a.x, b.x, a.y, b.y}, Deployment{{a}, {b}}});
                }
    std::sort(all.begin(), all.end(),
              [](const Candidate& u, const Candidate& v) { return u.key < v.key; });
    double best_cap = -1.0;
    const Deployment* best_dep = nullptr;
    PhaseVector empty;
    for (const auto& cand : all) {
        Scenario s{room, layouts, cand.dep, params};
        const double cap = transport_capacity(s, empty).transport_capacity;
        if (cap > best_cap) {
            best_cap = cap;
            best_dep = &cand.dep;
        }
    }

    if (all.size() != 12 || res.statuses_evaluated != 12 ||
        res.best_capacity != best_cap || !(res.best_deployment == *best_dep)) {
        r.passed = false;
        std::ostringstream os;
        os << "search " << format_csv_double(res.best_capacity) << " over "
           << res.statuses_evaluated << " statuses vs oracle "
           << format_csv_double(best_cap) << " over " << all.size();
        r.detail = os.str();
    } else {
        r.detail = "12 statuses cross-checked";
    }
    return r;
}

} // namespace

std::vector<PropertyResult> run_validation_suite(const ExperimentConfig& c) {
    auto wanted = [&](const char* name) {
        if (!c.properties) return true;
        for (const auto& p : *c.properties)
            if (p == name) return true;
        return false;
    };
    std::vector<PropertyResult> out;
    if (wanted("chain")) out.push_back(check_chain(c));
    if (wanted("mc_sinr")) out.push_back(check_mc_sinr(c));
    if (wanted("phase_oracle")) out.push_back(check_phase_oracle(c));
    if (wanted("placement_oracle")) out.push_back(check_placement_oracle(c));
    return out;
}

namespace {
std::string sanitize_csv(std::string s) {
    for (char& ch : s)
        if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
    return s;
}
} // namespace

void write_sweep_csv(std::ostream& os, ExperimentConfig::Axis axis,
                     const std::vector<SweepRow>& rows, bool search_columns) {
    os << "sweep_axis,sweep_value,upper_bound";
    if (search_columns) os << ",achievable_capacity,statuses_evaluated";
    os << "\n";
    for (const auto& r : rows) {
        os << axis_name(axis) << ',' << format_csv_double(r.sweep_value) << ','
           << (r.upper_bound ? format_csv_double(*r.upper_bound) : "INVALID");
        if (search_columns)
            os << ',' << format_csv_double(r.achievable.value_or(0.0)) << ','
               << r.statuses_evaluated.value_or(0);
        os << "\n";
    }
}

void write_phases_csv(std::ostream& os, const PhaseOptResult& r) {
    os << "element,phase_rad\n";
    for (size_t i = 0; i < r.phases.phases.size(); ++i)
        os << i << ',' << format_csv_double(r.phases.phases[i]) << "\n";
}

void write_demo_csv(std::ostream& os, int element_count, const CancellationDemo& d) {
    os << "elements,baseline_sinr_db,optimized_sinr_db,improvement_db\n";
    os << element_count << ',' << format_csv_double(d.baseline_sinr_db) << ','
       << format_csv_double(d.optimized_sinr_db) << ','
       << format_csv_double(d.optimized_sinr_db - d.baseline_sinr_db) << "\n";
}

void write_validation_csv(std::ostream& os, const std::vector<PropertyResult>& rows) {
    os << "property,passed,detail\n";
    for (const auto& r : rows)
        os << r.property << ',' << (r.passed ? "true" : "false") << ','
           << sanitize_csv(r.detail) << "\n";
}

} // namespace reflectsim
