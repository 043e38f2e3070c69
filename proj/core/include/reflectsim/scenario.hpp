#pragma once

#include <cstdint>
#include <vector>

#include "reflectsim/channel.hpp"
#include "reflectsim/geometry.hpp"

namespace reflectsim {

// The immutable input to every evaluation: room, reflect-arrays, node
// deployment and link parameters. Multi-array setups pool all elements
// into one reflector index set (array-to-array double reflections are
// out of model).
struct Scenario {
    Room room;
    std::vector<ArrayLayout> layouts;
    Deployment deployment;
    LinkParams params;

    int pairs() const { return deployment.pairs(); }
    int pooled_element_count() const;

    // component invariants + every element inside the room
    void validate() const;
};

// All arrays' element centers concatenated in layout order.
std::vector<Point2D> pooled_elements(const Scenario& s);

// h[l][k]: transmitter k to receiver l, over the pooled elements.
std::vector<std::vector<ChannelVector>> channel_matrix(const Scenario& s);

// Symbol-rate BPSK Monte-Carlo of the received signal, one estimate per
// link. Per-transmitter symbol streams are shared across receivers and
// per-receiver noise streams are independent, all derived from `seed`
// via substream_seed, so results are bit-reproducible and independent
// of evaluation order. Throws std::invalid_argument when n_symbols = 0.
std::vector<EmpiricalSINR> simulate_received(const Scenario& s,
                                             const PhaseVector& phases,
                                             std::uint64_t n_symbols,
                                             std::uint64_t seed);

} // namespace reflectsim
