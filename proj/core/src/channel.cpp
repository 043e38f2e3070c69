#include "reflectsim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace reflectsim {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

void LinkParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("link parameter must be positive: ") + name);
    };
    positive(carrier_frequency_hz, "carrier_frequency_hz");
    positive(wave_number_rad_m, "wave_number_rad_m");
    positive(path_loss_exponent, "path_loss_exponent");
    positive(tx_power_mw, "tx_power_mw");
    positive(sinr_threshold, "sinr_threshold");
    positive(rate_bps, "rate_bps");
    if (!(noise_power_mw >= 0.0) || !std::isfinite(noise_power_mw))
        throw std::invalid_argument("link parameter must be >= 0: noise_power_mw");
    const double expected = 2.0 * kPi * carrier_frequency_hz / kSpeedOfLight;
    if (std::abs(wave_number_rad_m - expected) > 1e-9 * expected)
        throw std::invalid_argument("wave number inconsistent with carrier frequency");
}

LinkParams make_link_params(double carrier_frequency_hz,
                            double path_loss_exponent,
                            double tx_power_mw,
                            double noise_power_mw,
                            double sinr_threshold,
                            double rate_bps) {
    LinkParams p;
    p.carrier_frequency_hz = carrier_frequency_hz;
    p.wave_number_rad_m = 2.0 * kPi * carrier_frequency_hz / kSpeedOfLight;
    p.path_loss_exponent = path_loss_exponent;
    p.tx_power_mw = tx_power_mw;
    p.noise_power_mw = noise_power_mw;
    p.sinr_threshold = sinr_threshold;
    p.rate_bps = rate_bps;
    return p;
}

ChannelVector channel_vector(const Point2D& tx, const Point2D& rx,
                             const std::vector<Point2D>& elements,
                             const LinkParams& params) {
    const PathGeometry g = path_geometry(tx, rx, elements);
    ChannelVector h;
    h.entries.reserve(elements.size() + 1);
    const double alpha = params.path_loss_exponent;
    h.entries.emplace_back(std::pow(g.direct_m, -alpha), 0.0);
    for (size_t i = 0; i < g.reflected_m.size(); ++i)
        h.entries.push_back(std::polar(std::pow(g.reflected_m[i], -alpha),
                                       params.wave_number_rad_m * g.delta_m[i]));
    return h;
}

double effective_gain(const ChannelVector& h, const PhaseVector& v) {
    if (h.entries.size() != v.phases.size() + 1)
        throw std::invalid_argument("channel/steering dimension mismatch");
    std::complex<double> acc = std::conj(h.entries[0]); // steering entry 0 = 1
    for (size_t i = 0; i < v.phases.size(); ++i)
        acc += std::conj(h.entries[i + 1]) * std::polar(1.0, v.phases[i]);
    return std::norm(acc);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t domain,
                             std::uint64_t index) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    return mix(mix(seed ^ 0xd1b54a32d192ed03ull * (domain + 1)) ^
               0x8cb92ba72f3d8dd7ull * (index + 1));
}

} // namespace reflectsim
