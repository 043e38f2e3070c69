#include "reflectsim/scenario.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace reflectsim {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

// standard complex normal with unit total power, from two 53-bit uniforms
std::complex<double> complex_normal(std::mt19937_64& eng) {
    const double u1 = (double((eng() >> 11)) + 1.0) * 0x1.0p-53; // (0, 1]
    const double u2 = double(eng() >> 11) * 0x1.0p-53;           // [0, 1)
    const double r = std::sqrt(-std::log(u1)); // E{re^2 + im^2} = 1
    return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
}
} // namespace

int Scenario::pooled_element_count() const {
    int n = 0;
    for (const auto& l : layouts) n += l.element_count;
    return n;
}

void Scenario::validate() const {
    deployment.validate();
    params.validate();
    for (const auto& l : layouts) element_positions(room, l);
    auto in_room = [&](const Point2D& p) {
        return p.x >= 0.0 && p.x <= room.edge_m && p.y >= 0.0 && p.y <= room.edge_m;
    };
    for (const auto& p : deployment.tx_positions)
        if (!in_room(p)) throw std::invalid_argument("tx position outside the room");
    for (const auto& p : deployment.rx_positions)
        if (!in_room(p)) throw std::invalid_argument("rx position outside the room");
}

std::vector<Point2D> pooled_elements(const Scenario& s) {
    std::vector<Point2D> out;
    for (const auto& l : s.layouts) {
        auto pts = element_positions(s.room, l);
        out.insert(out.end(), pts.begin(), pts.end());
    }
    return out;
}

std::vector<std::vector<ChannelVector>> channel_matrix(const Scenario& s) {
    const auto elements = pooled_elements(s);
    const int n = s.pairs();
    std::vector<std::vector<ChannelVector>> h(n);
    for (int l = 0; l < n; ++l) {
        h[l].reserve(n);
        for (int k = 0; k < n; ++k)
            h[l].push_back(channel_vector(s.deployment.tx_positions[k],
                                          s.deployment.rx_positions[l],
                                          elements, s.params));
    }
    return h;
}

std::vector<EmpiricalSINR> simulate_received(const Scenario& s,
                                             const PhaseVector& phases,
                                             std::uint64_t n_symbols,
                                             std::uint64_t seed) {
    if (n_symbols == 0)
        throw std::invalid_argument("n_symbols must be >= 1");
    const auto h = channel_matrix(s);
    const int n = s.pairs();

    // complex link gains h^H v_phi; |g|^2 is the effective power gain
    std::vector<std::vector<std::complex<double>>> g(n, std::vector<std::complex<double>>(n));
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k) {
            if (h[l][k].entries.size() != phases.phases.size() + 1)
                throw std::invalid_argument("channel/steering dimension mismatch");
            std::complex<double> acc = std::conj(h[l][k].entries[0]);
            for (size_t i = 0; i < phases.phases.size(); ++i)
                acc += std::conj(h[l][k].entries[i + 1]) * std::polar(1.0, phases.phases[i]);
            g[l][k] = acc;
        }

    std::vector<std::mt19937_64> tx_eng, rx_eng;
    for (int k = 0; k < n; ++k) tx_eng.emplace_back(substream_seed(seed, 0, k));
    for (int l = 0; l < n; ++l) rx_eng.emplace_back(substream_seed(seed, 1, l));

    const double rho = std::sqrt(s.params.tx_power_mw);
    const double noise_scale = std::sqrt(s.params.noise_power_mw);
    std::vector<double> sig_acc(n, 0.0), intf_acc(n, 0.0), noise_acc(n, 0.0);
    std::vector<double> sym(n);

    for (std::uint64_t t = 0; t < n_symbols; ++t) {
        for (int k = 0; k < n; ++k)
            sym[k] = (tx_eng[k]() & 1u) ? rho : -rho;
        for (int l = 0; l < n; ++l) {
            const std::complex<double> sig = g[l][l] * sym[l];
            std::complex<double> intf{0.0, 0.0};
            for (int k = 0; k < n; ++k)
                if (k != l) intf += g[l][k] * sym[k];
            const std::complex<double> nz = noise_scale * complex_normal(rx_eng[l]);
            sig_acc[l] += std::norm(sig);
            intf_acc[l] += std::norm(intf);
            noise_acc[l] += std::norm(nz);
        }
    }

    std::vector<EmpiricalSINR> out(n);
    for (int l = 0; l < n; ++l) {
        auto& e = out[l];
        e.signal_power_mw = sig_acc[l] / double(n_symbols);
        e.interference_power_mw = intf_acc[l] / double(n_symbols);
        e.noise_power_mw = noise_acc[l] / double(n_symbols);
        e.sinr = e.signal_power_mw / (e.interference_power_mw + e.noise_power_mw);
        e.symbols_used = n_symbols;
    }
    return out;
}

} // namespace reflectsim
