#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "reflectsim/capacity.hpp"
#include "reflectsim/scenario.hpp"

namespace reflectsim {

enum class PhaseMethod { CoordinateAscent, Exhaustive };

// Controls the per-status phase search. The grid of candidate phases is
// {-pi, -pi+step, ..., pi-step}; the step must divide 2*pi into an
// integer number of levels.
struct PhaseSearchConfig {
    PhaseMethod method = PhaseMethod::CoordinateAscent;
    double phase_step = 3.141592653589793238462643383279502884 / 180.0;
    int max_sweeps = 20;
    double convergence_tol = 1e-9; // relative improvement per full sweep
    std::uint64_t seed = 0;
    int restarts = 0; // extra ascent runs from seeded random grid phases

    int levels() const;
    void validate() const; // throws std::invalid_argument
};

// What a phase search maximizes.
struct Objective {
    enum class Kind { TransportCapacity, MinSinr, SingleLinkSinr };
    Kind kind = Kind::TransportCapacity;
    int link = 0; // SingleLinkSinr only

    static Objective transport() { return {Kind::TransportCapacity, 0}; }
    static Objective min_sinr() { return {Kind::MinSinr, 0}; }
    static Objective single_link(int l) { return {Kind::SingleLinkSinr, l}; }
};

// Maximize the objective over per-element phases.
//
// Coordinate ascent starts from all-zero phases (plus `restarts` seeded
// random starts), sweeps elements in ascending order setting each phase
// to its best grid value with the others held fixed, and stops after
// max_sweeps or when a full sweep improves the objective by less than
// convergence_tol (relative). Feasibility-gated objectives break ties
// through the minimum link SINR so the ascent has a usable gradient when
// capacity sits at 0 or at its geometric ceiling.
//
// The exhaustive method scans the full joint grid (levels^N points) and
// is limited to N <= 3 (BudgetExceededError beyond). Ties everywhere
// resolve to the lexicographically smallest phase vector.
//
// The returned value is a fresh evaluation at the returned phases, so
// re-evaluating reproduces it exactly.
std::pair<PhaseVector, double> optimize_phases(const Scenario& s,
                                               const Objective& objective,
                                               const PhaseSearchConfig& config);

struct PlacementSearchConfig {
    enum class Mode { Exhaustive, Randomized };
    Mode mode = Mode::Exhaustive;
    std::uint64_t sample_budget = 0; // randomized mode only
    std::uint64_t seed = 0;
    int parallel_workers = 1;
    std::uint64_t exhaustive_cap = 10000000; // hard evaluation cap

    void validate() const;
};

struct SearchResult {
    double best_capacity = 0.0;
    Deployment best_deployment;
    PhaseVector best_phases;
    std::uint64_t statuses_evaluated = 0;
    // (status index, capacity) whenever the running maximum improved,
    // scanning statuses in index order
    std::vector<std::pair<std::uint64_t, double>> objective_trace;
};

// Maximum transport capacity over node placements, optimizing phases per
// candidate. Exhaustive mode walks every status; randomized mode draws
// sample_budget distinct status indices (a budget >= K degenerates to
// the full set). Candidates are split across parallel_workers and merged
// by (capacity, then smallest status index), so the result does not
// depend on the worker count. Throws BudgetExceededError when exhaustive
// mode would exceed exhaustive_cap evaluations.
SearchResult search_placements(const Room& room,
                               const std::vector<ArrayLayout>& layouts,
                               int pairs, const LinkParams& params,
                               const PhaseSearchConfig& phase_config,
                               const PlacementSearchConfig& placement_config);

struct CancellationDemo {
    double baseline_sinr_db = 0.0;  // all-zero phases
    double optimized_sinr_db = 0.0; // after single-link phase search
};

// Two transmitters at equal 0.6 m range from one receiver in front of a
// mid-wall array (3 m room): the baseline SINR sits near 0 dB by
// symmetry; the phase search then boosts the wanted link and cancels the
// interferer.
CancellationDemo interference_cancellation_demo(int element_count,
                                                const PhaseSearchConfig& config);

} // namespace reflectsim
