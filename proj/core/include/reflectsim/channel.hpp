#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "reflectsim/geometry.hpp"

namespace reflectsim {

inline constexpr double kSpeedOfLight = 3e8; // m/s, free-space convention

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);
double db_to_linear(double db);
double linear_to_db(double ratio);

// Link-level constants shared by every channel in a scenario. All values
// are linear; dB/dBm inputs are converted at the configuration boundary.
struct LinkParams {
    double carrier_frequency_hz = 2.4e9;
    double wave_number_rad_m = 2.0 * 3.141592653589793238462643383279502884 *
                               2.4e9 / kSpeedOfLight; // k0 = 2*pi*f/c
    double path_loss_exponent = 3.0;   // alpha
    double tx_power_mw = 1.0;          // rho^2
    double noise_power_mw = 1e-9;      // sigma^2, -90 dBm
    double sinr_threshold = 3.1622776601683795; // beta, 5 dB
    double rate_bps = 1e5;             // R

    // Enforced at the configuration boundary, not on construction, so the
    // plain math helpers stay usable with off-spec values (e.g. alpha = 0).
    // Throws std::invalid_argument. Requires wave number consistent with
    // the carrier frequency to 1e-9 relative; noise may be exactly 0
    // (disabled), everything else must be strictly positive.
    void validate() const;
};

// k0 derived from the carrier
LinkParams make_link_params(double carrier_frequency_hz,
                            double path_loss_exponent,
                            double tx_power_mw,
                            double noise_power_mw,
                            double sinr_threshold,
                            double rate_bps);

// Complex path gains of one tx->rx link: entry 0 is the direct path,
// entries 1..N the per-element reflected paths.
struct ChannelVector {
    std::vector<std::complex<double>> entries; // a_i * e^{j theta_i}
};

// Controllable per-element phases. The induced steering vector is
// [1, e^{j phi_1}, ..., e^{j phi_N}] (direct path is not steerable).
struct PhaseVector {
    std::vector<double> phases; // radians, [-pi, pi]
};

// Monte-Carlo per-link power estimates.
struct EmpiricalSINR {
    double signal_power_mw = 0.0;
    double interference_power_mw = 0.0;
    double noise_power_mw = 0.0;
    double sinr = 0.0; // signal / (interference + noise)
    std::uint64_t symbols_used = 0;
};

// Entry 0 = d0^{-alpha}; entry i = d_i^{-alpha} * e^{j k0 (d_i - d0)}.
// Propagates the degenerate-geometry error from path_geometry.
ChannelVector channel_vector(const Point2D& tx, const Point2D& rx,
                             const std::vector<Point2D>& elements,
                             const LinkParams& params);

// |h^H v_phi|^2. Throws std::invalid_argument on length mismatch.
double effective_gain(const ChannelVector& h, const PhaseVector& v);

// Deterministic substream derivation: two rounds of the splitmix64
// finalizer over (seed, domain, index). Domain 0 = transmitter symbol
// streams, domain 1 = receiver noise streams.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t domain,
                             std::uint64_t index);

} // namespace reflectsim
