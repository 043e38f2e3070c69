#include "reflectsim/capacity.hpp"

#include <cmath>
#include <stdexcept>

#include "reflectsim/errors.hpp"

namespace reflectsim {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

std::vector<double> gains_for_link(const std::vector<std::vector<ChannelVector>>& h,
                                   const PhaseVector& phases, int l) {
    std::vector<double> g(h.size());
    for (size_t k = 0; k < h.size(); ++k)
        g[k] = effective_gain(h[l][k], phases);
    return g;
}

double sinr_from_gains(const std::vector<double>& g, const LinkParams& p, int l) {
    double interference = 0.0;
    for (size_t k = 0; k < g.size(); ++k)
        if (int(k) != l) interference += p.tx_power_mw * g[k];
    return p.tx_power_mw * g[l] / (p.noise_power_mw + interference);
}
} // namespace

double eta(double sinr_threshold) { return (sinr_threshold + 1.0) / sinr_threshold; }

double sinr(const Scenario& s, const PhaseVector& phases, int l) {
    if (l < 0 || l >= s.pairs())
        throw std::out_of_range("link index out of range");
    const auto h = channel_matrix(s);
    return sinr_from_gains(gains_for_link(h, phases, l), s.params, l);
}

std::vector<double> sinr_all(const Scenario& s, const PhaseVector& phases) {
    const auto h = channel_matrix(s);
    std::vector<double> out(s.pairs());
    for (int l = 0; l < s.pairs(); ++l)
        out[l] = sinr_from_gains(gains_for_link(h, phases, l), s.params, l);
    return out;
}

CapacityReport transport_capacity(const Scenario& s, const PhaseVector& phases) {
    CapacityReport r;
    r.per_link_sinr = sinr_all(s, phases);
    r.feasible = true;
    for (double v : r.per_link_sinr)
        if (!(v >= s.params.sinr_threshold)) r.feasible = false;
    if (r.feasible) {
        double sum = 0.0;
        for (int l = 0; l < s.pairs(); ++l)
            sum += std::pow(distance(s.deployment.tx_positions[l],
                                     s.deployment.rx_positions[l]),
                            s.params.path_loss_exponent);
        r.transport_capacity = s.params.rate_bps * sum;
    }
    r.per_link_bound.reserve(s.pairs());
    for (int l = 0; l < s.pairs(); ++l)
        r.per_link_bound.push_back(link_distance_bound(s, phases, l));
    return r;
}

BoundTerms bound_terms(const Scenario& s, const PhaseVector& phases, int l) {
    if (l < 0 || l >= s.pairs())
        throw std::out_of_range("link index out of range");
    const auto elements = pooled_elements(s);
    if (phases.phases.size() != elements.size())
        throw std::invalid_argument("phase vector length mismatch");
    const double alpha = s.params.path_loss_exponent;
    const double k0 = s.params.wave_number_rad_m;
    const double trig_coeff = 2.0 * std::sqrt(std::sqrt(2.0) + 2.0);

    BoundTerms t;
    t.eta = eta(s.params.sinr_threshold);
    for (int k = 0; k < s.pairs(); ++k) {
        if (k == l) continue;
        const PathGeometry g = path_geometry(s.deployment.tx_positions[k],
                                             s.deployment.rx_positions[l], elements);
        const double inv0 = std::pow(g.direct_m, -alpha);
        double cos_sum = inv0, sin_sum = 0.0;
        double cross = 0.0, sin45_sum = 0.0, trig = 0.0;
        for (size_t i = 0; i < elements.size(); ++i) {
            const double ai = std::pow(g.reflected_m[i], -alpha);
            const double psi = k0 * g.delta_m[i] - phases.phases[i];
            cos_sum += ai * std::cos(psi);
            sin_sum += ai * std::sin(psi);
            cross += 2.0 * inv0 * ai * std::cos(psi);
            sin45_sum += ai * std::sin(psi + kPi / 4.0);
            trig += trig_coeff * inv0 * ai * std::cos(psi - kPi / 8.0);
        }
        t.I += cos_sum * cos_sum + sin_sum * sin_sum;
        t.I_lb_am_gm += inv0 * inv0 + cross + sin45_sum * sin45_sum;
        t.I_lb_trig += trig;
    }
    return t;
}

std::optional<double> link_distance_bound(const Scenario& s,
                                          const PhaseVector& phases, int l) {
    const BoundTerms t = bound_terms(s, phases, l);
    const auto elements = pooled_elements(s);
    const double alpha = s.params.path_loss_exponent;
    const double k0 = s.params.wave_number_rad_m;
    const double inside = t.eta * s.params.noise_power_mw / s.params.tx_power_mw +
                          t.eta * std::abs(t.I);
    double denom = std::sqrt(inside);
    const PathGeometry g = path_geometry(s.deployment.tx_positions[l],
                                         s.deployment.rx_positions[l], elements);
    for (size_t i = 0; i < elements.size(); ++i)
        denom -= std::pow(g.reflected_m[i], -alpha) *
                 std::cos(k0 * g.delta_m[i] - phases.phases[i]);
    if (!(denom > 0.0)) return std::nullopt;
    return 1.0 / denom;
}

double upper_bound(const LinkParams& params, int pairs, int element_count,
                   double d_min, double d_max) {
    if (pairs < 1) throw std::invalid_argument("pair count must be >= 1");
    if (element_count < 0) throw std::invalid_argument("element count must be >= 0");
    if (!(d_min > 0.0) || !(d_min < d_max))
        throw std::invalid_argument("need 0 < d_min < d_max");
    const double a = params.path_loss_exponent;
    const double e = eta(params.sinr_threshold);
    const double inside = e * params.noise_power_mw / params.tx_power_mw +
                          (std::sqrt(2.0) + 2.0) * e * element_count * pairs /
                              std::pow(d_max, 2.0 * a);
    const double denom = std::sqrt(inside) - element_count / std::pow(d_min, a);
    if (!(denom > 0.0))
        throw BoundInvalidError("closed-form bound denominator is not positive");
    return params.rate_bps * pairs / denom;
}

} // namespace reflectsim
