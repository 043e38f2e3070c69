#include "reflectsim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>

#include "reflectsim/errors.hpp"

namespace reflectsim {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// lexicographic (primary objective, tie-break) score
using Score = std::pair<double, double>;

// Incremental objective evaluator. set_phases accumulates the link inner
// products with exactly the same operation order as effective_gain /
// transport_capacity, so a fresh evaluation here reproduces the capacity
// module's numbers bit for bit. Per-element candidate moves are O(L^2).
struct Evaluator {
    int links = 0;
    int elements = 0;
    double rho2 = 0.0, sigma2 = 0.0, beta = 0.0;
    double capacity_if_feasible = 0.0;
    Objective obj;
    std::vector<std::vector<std::complex<double>>> hconj; // [l*links+k][0..N]
    std::vector<std::complex<double>> inner;              // current h^H v per link pair
    std::vector<std::complex<double>> unit;                // e^{j phi_i}

    Evaluator(const Scenario& s, const Objective& o) : obj(o) {
        links = s.pairs();
        elements = s.pooled_element_count();
        rho2 = s.params.tx_power_mw;
        sigma2 = s.params.noise_power_mw;
        beta = s.params.sinr_threshold;
        double sum = 0.0;
        for (int l = 0; l < links; ++l)
            sum += std::pow(distance(s.deployment.tx_positions[l],
                                     s.deployment.rx_positions[l]),
                            s.params.path_loss_exponent);
        capacity_if_feasible = s.params.rate_bps * sum;
        const auto h = channel_matrix(s);
        hconj.resize(size_t(links) * links);
        for (int l = 0; l < links; ++l)
            for (int k = 0; k < links; ++k) {
                auto& dst = hconj[size_t(l) * links + k];
                dst.reserve(elements + 1);
                for (const auto& e : h[l][k].entries) dst.push_back(std::conj(e));
            }
        inner.assign(size_t(links) * links, {0.0, 0.0});
        unit.assign(elements, {1.0, 0.0});
    }

    void set_phases(const std::vector<double>& ph) {
        for (int i = 0; i < elements; ++i) unit[i] = std::polar(1.0, ph[i]);
        for (size_t p = 0; p < hconj.size(); ++p) {
            std::complex<double> acc = hconj[p][0];
            for (int i = 0; i < elements; ++i) acc += hconj[p][i + 1] * unit[i];
            inner[p] = acc;
        }
    }

    // score with element i moved to u; i = -1 evaluates the current state
    Score score_with(int i, std::complex<double> u) const {
        auto entry = [&](int l, int k) {
            std::complex<double> v = inner[size_t(l) * links + k];
            if (i >= 0) v += hconj[size_t(l) * links + k][i + 1] * (u - unit[i]);
            return v;
        };
        auto link_sinr = [&](int l) {
            double interference = 0.0;
            for (int k = 0; k < links; ++k)
                if (k != l) interference += rho2 * std::norm(entry(l, k));
            return rho2 * std::norm(entry(l, l)) / (sigma2 + interference);
        };
        if (obj.kind == Objective::Kind::SingleLinkSinr)
            return {link_sinr(obj.link), 0.0};
        double min_sinr = std::numeric_limits<double>::infinity();
        bool feasible = true;
        for (int l = 0; l < links; ++l) {
            const double v = link_sinr(l);
            min_sinr = std::min(min_sinr, v);
            if (!(v >= beta)) feasible = false;
        }
        if (obj.kind == Objective::Kind::MinSinr) return {min_sinr, 0.0};
        return {feasible ? capacity_if_feasible : 0.0, min_sinr};
    }

    void commit(int i, std::complex<double> u) {
        for (size_t p = 0; p < hconj.size(); ++p)
            inner[p] += hconj[p][i + 1] * (u - unit[i]);
        unit[i] = u;
    }
};

double relative_gain(double now, double before) {
    if (!(now > before)) return 0.0;
    if (before <= 0.0) return std::numeric_limits<double>::infinity();
    return (now - before) / before;
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

int PhaseSearchConfig::levels() const {
    return static_cast<int>(std::llround(2.0 * kPi / phase_step));
}

void PhaseSearchConfig::validate() const {
    if (!(phase_step > 0.0) || !std::isfinite(phase_step))
        throw std::invalid_argument("phase_step must be positive");
    const int n = levels();
    if (n < 1 || std::abs(n * phase_step - 2.0 * kPi) > 1e-9 * 2.0 * kPi)
        throw std::invalid_argument("phase_step must divide 2*pi into an integer number of levels");
    if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be >= 1");
    if (convergence_tol < 0.0) throw std::invalid_argument("convergence_tol must be >= 0");
    if (restarts < 0) throw std::invalid_argument("restarts must be >= 0");
}

void PlacementSearchConfig::validate() const {
    if (mode == Mode::Randomized && sample_budget < 1)
        throw std::invalid_argument("randomized mode needs sample_budget >= 1");
    if (parallel_workers < 1)
        throw std::invalid_argument("parallel_workers must be >= 1");
    if (exhaustive_cap < 1)
        throw std::invalid_argument("exhaustive_cap must be >= 1");
}

std::pair<PhaseVector, double> optimize_phases(const Scenario& s,
                                               const Objective& objective,
                                               const PhaseSearchConfig& config) {
    config.validate();
    s.validate();
    if (objective.kind == Objective::Kind::SingleLinkSinr &&
        (objective.link < 0 || objective.link >= s.pairs()))
        throw std::out_of_range("objective link index out of range");

    Evaluator ev(s, objective);
    const int n = ev.elements;
    if (n == 0) {
        std::vector<double> none;
        ev.set_phases(none);
        return {PhaseVector{}, ev.score_with(-1, {1.0, 0.0}).first};
    }

    const int levels = config.levels();
    std::vector<double> grid(levels);
    for (int v = 0; v < levels; ++v) grid[v] = -kPi + v * config.phase_step;

    if (config.method == PhaseMethod::Exhaustive) {
        if (n > 3)
            throw BudgetExceededError("exhaustive joint phase search is limited to 3 elements; "
                                      "use coordinate ascent");
        std::vector<int> digit(n, 0);
        std::vector<double> ph(n), best_ph;
        Score best{-std::numeric_limits<double>::infinity(), 0.0};
        while (true) {
            for (int i = 0; i < n; ++i) ph[i] = grid[digit[i]];
            ev.set_phases(ph);
            const Score sc = ev.score_with(-1, {1.0, 0.0});
            if (sc > best) { // strict: the lexicographically first argmax wins
                best = sc;
                best_ph = ph;
            }
            int t = n - 1;
            while (t >= 0 && digit[t] == levels - 1) digit[t--] = 0;
            if (t < 0) break;
            ++digit[t];
        }
        return {PhaseVector{best_ph}, best.first};
    }

    // coordinate ascent, restart 0 from all-zero phases
    std::vector<double> best_ph;
    Score best{-std::numeric_limits<double>::infinity(), 0.0};
    const int runs = 1 + config.restarts;
    for (int run = 0; run < runs; ++run) {
        std::vector<double> ph(n, 0.0);
        if (run > 0) {
            std::mt19937_64 eng(substream_seed(config.seed, 5, run - 1));
            for (int i = 0; i < n; ++i) ph[i] = grid[eng() % levels];
        }
        ev.set_phases(ph);
        Score run_best = ev.score_with(-1, {1.0, 0.0});
        std::vector<double> run_best_ph = ph;
        Score prev = run_best;
        for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
            for (int i = 0; i < n; ++i) {
                Score elem_best{-std::numeric_limits<double>::infinity(), 0.0};
                int elem_v = 0;
                for (int v = 0; v < levels; ++v) {
                    const Score sc = ev.score_with(i, std::polar(1.0, grid[v]));
                    if (sc > elem_best) { // ties keep the smallest phase
                        elem_best = sc;
                        elem_v = v;
                    }
                }
                ph[i] = grid[elem_v];
                ev.commit(i, std::polar(1.0, grid[elem_v]));
            }
            ev.set_phases(ph); // fresh recompute kills incremental drift
            const Score fresh = ev.score_with(-1, {1.0, 0.0});
            if (fresh > run_best) {
                run_best = fresh;
                run_best_ph = ph;
            }
            const double gain = std::max(relative_gain(fresh.first, prev.first),
                                         relative_gain(fresh.second, prev.second));
            prev = fresh;
            if (gain < config.convergence_tol) break;
        }
        if (run_best > best || (run_best == best && run_best_ph < best_ph)) {
            best = run_best;
            best_ph = run_best_ph;
        }
    }
    return {PhaseVector{best_ph}, best.first};
}

SearchResult search_placements(const Room& room,
                               const std::vector<ArrayLayout>& layouts,
                               int pairs, const LinkParams& params,
                               const PhaseSearchConfig& phase_config,
                               const PlacementSearchConfig& placement_config) {
    phase_config.validate();
    placement_config.validate();
    params.validate();
    for (const auto& l : layouts) element_positions(room, l); // fail early
    int pooled = 0;
    for (const auto& l : layouts) pooled += l.element_count;

    PlacementEnumerator base(room, pairs);
    const std::uint64_t total_statuses = base.total_count();

    const bool full = placement_config.mode == PlacementSearchConfig::Mode::Exhaustive ||
                      placement_config.sample_budget >= total_statuses;
    if (placement_config.mode == PlacementSearchConfig::Mode::Exhaustive &&
        total_statuses > placement_config.exhaustive_cap)
        throw BudgetExceededError(
            "exhaustive placement search needs " + std::to_string(total_statuses) +
            " evaluations, above the cap of " + std::to_string(placement_config.exhaustive_cap) +
            "; switch to randomized mode with a sample budget");

    std::vector<std::uint64_t> sampled;
    if (!full) {
        std::mt19937_64 eng(substream_seed(placement_config.seed, 3, 0));
        std::unordered_set<std::uint64_t> seen;
        sampled.reserve(placement_config.sample_budget);
        while (sampled.size() < placement_config.sample_budget) {
            const std::uint64_t x = draw_below(eng, total_statuses);
            if (seen.insert(x).second) sampled.push_back(x);
        }
        std::sort(sampled.begin(), sampled.end());
    }
    const std::uint64_t candidates = full ? total_statuses : sampled.size();

    struct WorkerOut {
        bool any = false;
        double cap = 0.0;
        std::uint64_t idx = 0;
        PhaseVector phases;
        Deployment deployment;
        std::vector<std::pair<std::uint64_t, double>> trace;
        std::exception_ptr error;
    };

    const int workers = int(std::min<std::uint64_t>(
        std::max(1, placement_config.parallel_workers), candidates));
    std::vector<WorkerOut> outs(workers);

    auto run_worker = [&](int w, std::uint64_t first, std::uint64_t count) {
        WorkerOut& out = outs[w];
        try {
            PlacementEnumerator en(room, pairs);
            if (full && count > 0) en.skip_to(first);
            double running = -1.0;
            for (std::uint64_t c = 0; c < count; ++c) {
                std::uint64_t idx;
                std::optional<Deployment> dep;
                if (full) {
                    idx = first + c;
                    dep = en.next();
                } else {
                    idx = sampled[first + c];
                    en.skip_to(idx);
                    dep = en.next();
                }
                if (!dep) break; // saturated index space; nothing left to visit
                double cap = 0.0;
                PhaseVector ph;
                ph.phases.assign(pooled, 0.0);
                try {
                    Scenario sc{room, layouts, *dep, params};
                    PhaseSearchConfig pc = phase_config;
                    pc.seed = substream_seed(phase_config.seed, 4, idx);
                    auto r = optimize_phases(sc, Objective::transport(), pc);
                    ph = std::move(r.first);
                    cap = r.second;
                } catch (const std::invalid_argument&) {
                    // node coincides with a reflector element: no capacity
                }
                if (!out.any || cap > out.cap) {
                    out.any = true;
                    out.cap = cap;
                    out.idx = idx;
                    out.phases = ph;
                    out.deployment = *dep;
                }
                if (cap > running) {
                    running = cap;
                    out.trace.emplace_back(idx, cap);
                }
            }
        } catch (...) {
            out.error = std::current_exception();
        }
    };

    std::vector<std::thread> pool;
    std::uint64_t cursor = 0;
    for (int w = 0; w < workers; ++w) {
        const std::uint64_t count = candidates / workers + (std::uint64_t(w) < candidates % workers ? 1 : 0);
        if (w == workers - 1)
            run_worker(w, cursor, count);
        else
            pool.emplace_back(run_worker, w, cursor, count);
        cursor += count;
    }
    for (auto& t : pool) t.join();
    for (auto& o : outs)
        if (o.error) std::rethrow_exception(o.error);

    SearchResult result;
    result.statuses_evaluated = candidates;
    bool any = false;
    double running = -1.0;
    for (const auto& o : outs) {
        if (o.any && (!any || o.cap > result.best_capacity)) {
            any = true; // workers are ordered by index range, so ties keep the smallest index
            result.best_capacity = o.cap;
            result.best_deployment = o.deployment;
            result.best_phases = o.phases;
        }
        for (const auto& [idx, cap] : o.trace)
            if (cap > running) {
                running = cap;
                result.objective_trace.emplace_back(idx, cap);
            }
    }
    return result;
}

CancellationDemo interference_cancellation_demo(int element_count,
                                                const PhaseSearchConfig& config) {
    if (element_count < 0)
        throw std::invalid_argument("element count must be >= 0");
    Scenario s;
    s.room = Room(3.0, 30);
    if (element_count > 0)
        s.layouts.push_back(midwall_layout(s.room, 0, element_count, 0.0625));
    // receiver 0.6 m in front of the array center; both transmitters at
    // 0.6 m from the receiver, mirror-symmetric about the array
    s.deployment.tx_positions = {{0.9, 0.6}, {2.1, 0.6}};
    s.deployment.rx_positions = {{1.5, 0.6}, {0.3, 2.7}};
    s.params = LinkParams{};

    PhaseVector zeros;
    zeros.phases.assign(s.pooled_element_count(), 0.0);
    CancellationDemo demo;
    demo.baseline_sinr_db = linear_to_db(sinr(s, zeros, 0));
    const auto optimized = optimize_phases(s, Objective::single_link(0), config);
    demo.optimized_sinr_db = linear_to_db(optimized.second);
    return demo;
}

} // namespace reflectsim
