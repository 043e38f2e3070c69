#pragma once

#include <optional>
#include <vector>

#include "reflectsim/scenario.hpp"

namespace reflectsim {

// eta = (beta + 1) / beta with linear beta
double eta(double sinr_threshold);

// Interference term and its two successive lower bounds for one link.
// The chain I >= I_lb_am_gm >= I_lb_trig holds pointwise for any input:
// the first step replaces cos^2+sin^2 cross terms via
// x1^2 + x2^2 >= (x1+x2)^2 / 2, the second uses x1^2 + x2^2 >= 2*x1*x2
// and cos A + cos(A - pi/4) = 2 cos(pi/8) cos(A - pi/8).
struct BoundTerms {
    double I = 0.0;          // sum over cross links of the squared sums
    double I_lb_am_gm = 0.0; // after the arithmetic-geometric step
    double I_lb_trig = 0.0;  // closed trigonometric form
    double eta = 0.0;
};

struct CapacityReport {
    std::vector<double> per_link_sinr;              // linear
    bool feasible = false;                          // all links >= beta
    double transport_capacity = 0.0;                // bits * m^alpha / s
    std::vector<std::optional<double>> per_link_bound; // m^alpha, absent when vacuous
};

// Analytic SINR of link l (0-based): rho^2 G_ll / (sigma^2 + rho^2 sum G_lk).
// Throws std::out_of_range on a bad link index.
double sinr(const Scenario& s, const PhaseVector& phases, int l);

// All links at once (one channel-matrix build).
std::vector<double> sinr_all(const Scenario& s, const PhaseVector& phases);

// Feasibility-gated capacity: R * sum_l d_{l,l,0}^alpha when every link
// meets the threshold, exactly 0 otherwise. Also evaluates the per-link
// distance bound for reporting.
CapacityReport transport_capacity(const Scenario& s, const PhaseVector& phases);

// The interference term I and its lower-bound chain for link l.
BoundTerms bound_terms(const Scenario& s, const PhaseVector& phases, int l);

// Right side of the per-link distance bound,
//   1 / (sqrt(eta sigma^2/rho^2 + eta |I|) - sum_i d_{l,l,i}^{-alpha} cos(k0 dd_i - phi_i));
// absent when the denominator is not positive (bound vacuous).
std::optional<double> link_distance_bound(const Scenario& s,
                                          const PhaseVector& phases, int l);

// Closed-form network-wide cap,
//   R L / (sqrt(eta sigma^2/rho^2 + (sqrt2+2) eta N L / d_max^{2 alpha}) - N / d_min^alpha).
// Throws BoundInvalidError when the denominator is not positive.
double upper_bound(const LinkParams& params, int pairs, int element_count,
                   double d_min, double d_max);

} // namespace reflectsim
