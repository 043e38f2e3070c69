#include "reflectsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace reflectsim {

namespace {

// Saturating 128-bit counters for status-space sizes. Saturation only has
// to stay above any uint64 index for ranking decisions to be exact.
using u128 = unsigned __int128;
constexpr u128 kSat = u128(1) << 100;

u128 sat_add(u128 a, u128 b) {
    u128 s = a + b;
    return s >= kSat ? kSat : s;
}

u128 sat_mul(u128 a, u128 b) {
    if (a == 0 || b == 0) return 0;
    if (a > kSat / b) return kSat;
    u128 p = a * b;
    return p >= kSat ? kSat : p;
}

// n(n-1)...(n-k+1); 0 when k > n
u128 falling_factorial(std::int64_t n, int k) {
    if (k < 0 || k > n) return 0;
    u128 r = 1;
    for (int i = 0; i < k; ++i) r = sat_mul(r, u128(n - i));
    return r;
}

} // namespace

double distance(const Point2D& a, const Point2D& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

Room::Room(double edge, int divisions) : edge_m(edge), grid_divisions(divisions) {
    if (!(edge > 0.0) || !std::isfinite(edge))
        throw std::invalid_argument("room edge length must be positive");
    if (divisions < 1)
        throw std::invalid_argument("room grid divisions must be >= 1");
}

std::int64_t Room::grid_point_count() const {
    std::int64_t p = points_per_axis();
    return p * p;
}

Point2D Room::grid_point(int xi, int yi) const {
    if (xi < 0 || xi >= points_per_axis() || yi < 0 || yi >= points_per_axis())
        throw std::invalid_argument("grid index outside the room");
    return {xi * grid_spacing(), yi * grid_spacing()};
}

ArrayLayout::ArrayLayout(Point2D c, Wall w, int count, double spacing)
    : center(c), wall(w), element_count(count), element_spacing_m(spacing) {
    if (count < 1) throw std::invalid_argument("array element count must be >= 1");
    if (!(spacing > 0.0)) throw std::invalid_argument("array element spacing must be positive");
}

ArrayLayout midwall_layout(const Room& room, int array_index,
                           int element_count, double spacing_m) {
    const double d = room.edge_m;
    switch (array_index) {
        case 0: return ArrayLayout({d / 2.0, 0.0}, Wall::Bottom, element_count, spacing_m);
        case 1: return ArrayLayout({0.0, d / 2.0}, Wall::Left, element_count, spacing_m);
        case 2: return ArrayLayout({d / 2.0, d}, Wall::Top, element_count, spacing_m);
        case 3: return ArrayLayout({d, d / 2.0}, Wall::Right, element_count, spacing_m);
        default: throw std::invalid_argument("array index must be 0..3");
    }
}

std::vector<Point2D> element_positions(const Room& room, const ArrayLayout& layout) {
    const double d = room.edge_m;
    const bool horizontal = layout.wall == Wall::Bottom || layout.wall == Wall::Top;
    const double wall_coord = (layout.wall == Wall::Bottom || layout.wall == Wall::Left)
        ? 0.0 : d;

    const double fixed = horizontal ? layout.center.y : layout.center.x;
    const double along = horizontal ? layout.center.x : layout.center.y;
    if (fixed != wall_coord)
        throw std::invalid_argument("layout invalid: array center is not on its wall");

    const int n = layout.element_count;
    const double half_span = 0.5 * (n - 1) * layout.element_spacing_m;
    if (along - half_span < 0.0 || along + half_span > d)
        throw std::invalid_argument("layout invalid: element span exceeds the wall");

    std::vector<Point2D> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double a = along + (i - 0.5 * (n - 1)) * layout.element_spacing_m;
        out.push_back(horizontal ? Point2D{a, wall_coord} : Point2D{wall_coord, a});
    }
    return out;
}

void Deployment::validate() const {
    if (tx_positions.empty() || tx_positions.size() != rx_positions.size())
        throw std::invalid_argument("deployment needs L >= 1 tx/rx position pairs");
    std::vector<Point2D> all(tx_positions);
    all.insert(all.end(), rx_positions.begin(), rx_positions.end());
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = i + 1; j < all.size(); ++j)
            if (all[i] == all[j])
                throw std::invalid_argument("deployment node positions must be pairwise distinct");
}

bool deployment_precedes(const Deployment& a, const Deployment& b) {
    auto key = [](const Deployment& d, auto proj) {
        std::vector<double> k;
        k.reserve(2 * d.tx_positions.size());
        for (const auto& p : d.tx_positions) k.push_back(proj(p));
        for (const auto& p : d.rx_positions) k.push_back(proj(p));
        return k;
    };
    auto ax = key(a, [](const Point2D& p) { return p.x; });
    auto bx = key(b, [](const Point2D& p) { return p.x; });
    if (ax != bx) return ax < bx;
    auto ay = key(a, [](const Point2D& p) { return p.y; });
    auto by = key(b, [](const Point2D& p) { return p.y; });
    return ay < by;
}

PathGeometry path_geometry(const Point2D& tx, const Point2D& rx,
                           const std::vector<Point2D>& elements) {
    if (tx == rx)
        throw std::invalid_argument("degenerate geometry: tx and rx coincide");
    PathGeometry g;
    g.direct_m = distance(tx, rx);
    g.reflected_m.reserve(elements.size());
    g.delta_m.reserve(elements.size());
    for (const auto& e : elements) {
        const double to_e = distance(tx, e);
        const double from_e = distance(e, rx);
        if (to_e == 0.0 || from_e == 0.0)
            throw std::invalid_argument("degenerate geometry: node coincides with a reflector element");
        const double d = to_e + from_e;
        g.reflected_m.push_back(d);
        g.delta_m.push_back(d - g.direct_m);
    }
    return g;
}

PlacementEnumerator::PlacementEnumerator(const Room& room, int pairs)
    : room_(room), pairs_(pairs), slots_(2 * pairs) {
    if (pairs < 1) throw std::invalid_argument("placement enumeration needs L >= 1");
    if (room.grid_point_count() < slots_)
        throw std::invalid_argument("infeasible: grid has fewer points than node slots");
    reset();
}

void PlacementEnumerator::reset() {
    xi_.assign(slots_, 0);
    yi_.assign(slots_, 0);
    exhausted_ = !seek_first_valid();
}

bool PlacementEnumerator::x_vector_admits_completion() const {
    // every x column must be able to host its slots with distinct y values
    const int cap = room_.points_per_axis();
    std::vector<int> count(cap, 0);
    for (int v : xi_)
        if (++count[v] > cap) return false;
    return true;
}

bool PlacementEnumerator::first_y_vector() {
    const int cap = room_.points_per_axis();
    for (int t = 0; t < slots_; ++t) {
        int v = 0;
        for (; v < cap; ++v) {
            bool used = false;
            for (int s = 0; s < t && !used; ++s)
                used = xi_[s] == xi_[t] && yi_[s] == v;
            if (!used) break;
        }
        if (v == cap) return false;
        yi_[t] = v;
    }
    return true;
}

bool PlacementEnumerator::advance_y_vector() {
    const int cap = room_.points_per_axis();
    for (int t = slots_ - 1; t >= 0; --t) {
        for (int v = yi_[t] + 1; v < cap; ++v) {
            bool used = false;
            for (int s = 0; s < t && !used; ++s)
                used = xi_[s] == xi_[t] && yi_[s] == v;
            if (used) continue;
            yi_[t] = v;
            // refill the tail with the smallest valid values
            for (int u = t + 1; u < slots_; ++u) {
                int w = 0;
                for (; w < cap; ++w) {
                    bool taken = false;
                    for (int s = 0; s < u && !taken; ++s)
                        taken = xi_[s] == xi_[u] && yi_[s] == w;
                    if (!taken) break;
                }
                yi_[u] = w; // always < cap when the x vector admits completion
            }
            return true;
        }
    }
    return false;
}

bool PlacementEnumerator::advance_x_vector() {
    const int cap = room_.points_per_axis();
    while (true) {
        int t = slots_ - 1;
        while (t >= 0 && xi_[t] == cap - 1) xi_[t--] = 0;
        if (t < 0) return false;
        ++xi_[t];
        if (x_vector_admits_completion()) return true;
    }
}

bool PlacementEnumerator::seek_first_valid() {
    if (!x_vector_admits_completion() && !advance_x_vector()) return false;
    return first_y_vector();
}

Deployment PlacementEnumerator::current() const {
    Deployment d;
    d.tx_positions.reserve(pairs_);
    d.rx_positions.reserve(pairs_);
    for (int s = 0; s < pairs_; ++s)
        d.tx_positions.push_back(room_.grid_point(xi_[s], yi_[s]));
    for (int s = pairs_; s < slots_; ++s)
        d.rx_positions.push_back(room_.grid_point(xi_[s], yi_[s]));
    return d;
}

std::optional<Deployment> PlacementEnumerator::next() {
    if (exhausted_) return std::nullopt;
    Deployment d = current();
    if (!advance_y_vector()) {
        if (advance_x_vector())
            first_y_vector();
        else
            exhausted_ = true;
    }
    return d;
}

std::uint64_t PlacementEnumerator::total_count() const {
    u128 k = falling_factorial(room_.grid_point_count(), slots_);
    const u128 umax = std::numeric_limits<std::uint64_t>::max();
    return k > umax ? std::numeric_limits<std::uint64_t>::max()
                    : static_cast<std::uint64_t>(k);
}

void PlacementEnumerator::skip_to(std::uint64_t index) {
    const int cap = room_.points_per_axis();
    u128 remaining = index;

    // Completions of a partial x assignment: distribute the r open slots
    // over the columns (multinomial) and give every column's slots distinct
    // y values (falling factorial). Binomial-convolution DP over columns.
    std::vector<std::vector<u128>> binom(slots_ + 1, std::vector<u128>(slots_ + 1, 0));
    for (int n = 0; n <= slots_; ++n) {
        binom[n][0] = 1;
        for (int k = 1; k <= n; ++k)
            binom[n][k] = sat_add(binom[n - 1][k - 1], n - 1 >= k ? binom[n - 1][k] : 0);
    }
    std::vector<int> col_count(cap, 0);
    auto x_completions = [&](int r) -> u128 {
        std::vector<u128> acc(r + 1, 0);
        acc[0] = 1;
        for (int v = 0; v < cap; ++v) {
            std::vector<u128> nxt(r + 1, 0);
            for (int s = 0; s <= r; ++s) {
                if (acc[s] == 0 && s > 0) continue;
                for (int k = 0; s + k <= r; ++k) {
                    u128 w = falling_factorial(cap, col_count[v] + k);
                    if (w == 0) break;
                    nxt[s + k] = sat_add(nxt[s + k],
                                         sat_mul(binom[s + k][k], sat_mul(w, acc[s])));
                }
            }
            acc = std::move(nxt);
        }
        return acc[r];
    };

    xi_.assign(slots_, 0);
    yi_.assign(slots_, 0);

    for (int t = 0; t < slots_; ++t) {
        bool placed = false;
        for (int v = 0; v < cap && !placed; ++v) {
            ++col_count[v];
            const u128 c = x_completions(slots_ - t - 1);
            if (remaining < c) {
                xi_[t] = v;
                placed = true;
            } else {
                remaining -= c;
                --col_count[v];
            }
        }
        if (!placed) {
            exhausted_ = true;
            return;
        }
    }

    // y digits: per-column pools of unused values shrink as we commit
    std::vector<int> assigned(cap, 0); // y values already fixed per column
    std::vector<int> open(cap, 0);     // slots per column still needing y
    for (int v : xi_) ++open[v];
    for (int t = 0; t < slots_; ++t) {
        const int v0 = xi_[t];
        bool placed = false;
        for (int w = 0; w < cap && !placed; ++w) {
            bool used = false;
            for (int s = 0; s < t && !used; ++s)
                used = xi_[s] == v0 && yi_[s] == w;
            if (used) continue;
            // completions with y_t = w
            u128 c = 1;
            for (int v = 0; v < cap; ++v) {
                const int avail = cap - assigned[v] - (v == v0 ? 1 : 0);
                const int need = open[v] - (v == v0 ? 1 : 0);
                c = sat_mul(c, falling_factorial(avail, need));
            }
            if (remaining < c) {
                yi_[t] = w;
                placed = true;
            } else {
                remaining -= c;
            }
        }
        if (!placed) {
            exhausted_ = true;
            return;
        }
        ++assigned[v0];
        --open[v0];
    }
    exhausted_ = false;
}

std::vector<Deployment> enumerate_placements(const Room& room, int pairs) {
    PlacementEnumerator e(room, pairs);
    std::vector<Deployment> out;
    while (auto d = e.next()) out.push_back(*d);
    return out;
}

std::pair<double, double> distance_extremes(
    const Room& room, const std::vector<ArrayLayout>& layouts,
    std::optional<double> d_min_override,
    std::optional<double> d_max_override) {
    (void)layouts; // defaults already cover wall-mounted arrays
    double d_min = d_min_override.value_or(room.grid_spacing());
    double d_max = d_max_override.value_or(std::sqrt(5.0) * room.edge_m);
    if (!(d_min > 0.0))
        throw std::invalid_argument("invalid bounds: d_min must be positive");
    if (d_min >= d_max)
        throw std::invalid_argument("invalid bounds: d_min must be smaller than d_max");
    return {d_min, d_max};
}

} // namespace reflectsim
