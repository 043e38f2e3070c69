#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace reflectsim {

struct Point2D {
    double x = 0.0; // m
    double y = 0.0; // m

    friend bool operator==(const Point2D& a, const Point2D& b) {
        return a.x == b.x && a.y == b.y;
    }
};

double distance(const Point2D& a, const Point2D& b);

// Square room [0,D] x [0,D], divided into an M x M pixel grid. Node
// positions live on the (M+1)^2 grid intersection points, boundary
// included.
struct Room {
    double edge_m = 10.0;    // D
    int grid_divisions = 10; // M

    Room() = default;
    Room(double edge, int divisions);

    double grid_spacing() const { return edge_m / grid_divisions; }
    int points_per_axis() const { return grid_divisions + 1; }
    // (M+1)^2 candidate node positions
    std::int64_t grid_point_count() const;
    Point2D grid_point(int xi, int yi) const;
};

// Which wall of the room an array is mounted on. The wall normal points
// into the room; elements run along the wall line.
enum class Wall { Bottom, Left, Top, Right };

// A line of equally spaced reflector elements centered on `center`,
// mounted flat on one wall.
struct ArrayLayout {
    Point2D center;
    Wall wall = Wall::Bottom;
    int element_count = 48;
    double element_spacing_m = 0.0625; // half wavelength at 2.4 GHz

    ArrayLayout() = default;
    ArrayLayout(Point2D c, Wall w, int count, double spacing);
};

// One array at the midpoint of each wall, in deployment order:
// bottom (D/2, 0), left (0, D/2), top (D/2, D), right (D, D/2).
ArrayLayout midwall_layout(const Room& room, int array_index,
                           int element_count, double spacing_m);

// Element centers along the wall, symmetric about layout.center.
// Throws std::invalid_argument if the span leaves the room boundary or
// the center is off its wall.
std::vector<Point2D> element_positions(const Room& room, const ArrayLayout& layout);

// Positions of the 2L node slots: transmitters first, then receivers,
// so slot order is (tx_1..tx_L, rx_1..rx_L).
struct Deployment {
    std::vector<Point2D> tx_positions;
    std::vector<Point2D> rx_positions;

    int pairs() const { return static_cast<int>(tx_positions.size()); }
    // distinctness of all 2L points and tx_l != rx_l
    void validate() const;

    friend bool operator==(const Deployment& a, const Deployment& b) {
        return a.tx_positions == b.tx_positions && a.rx_positions == b.rx_positions;
    }
};

// Orders deployments by the tuple (x_1..x_2L, y_1..y_2L), the same order
// the placement enumeration visits them in. Smaller == earlier status.
bool deployment_precedes(const Deployment& a, const Deployment& b);

// Direct and per-element reflected propagation lengths for one tx->rx link.
struct PathGeometry {
    double direct_m = 0.0;              // d_0
    std::vector<double> reflected_m;    // d_i = |tx - e_i| + |e_i - rx|
    std::vector<double> delta_m;        // d_i - d_0, exactly
};

// Throws std::invalid_argument when tx == rx.
PathGeometry path_geometry(const Point2D& tx, const Point2D& rx,
                           const std::vector<Point2D>& elements);

// Streams every assignment of 2L distinct grid points to the ordered node
// slots. Enumeration order is lexicographic in (x_1..x_2L, y_1..y_2L),
// i.e. a nest of coordinate loops with the y loops innermost.
//
// The stream is restartable: skip_to(i) positions it so the next call to
// next() yields status i. Instances are cheap to copy, so workers can
// partition [0, K) among themselves.
class PlacementEnumerator {
public:
    // Throws std::invalid_argument when the grid has fewer than 2L points.
    PlacementEnumerator(const Room& room, int pairs);

    std::optional<Deployment> next();

    // Total status count K = P!/(P-2L)!, saturated at uint64 max.
    std::uint64_t total_count() const;

    void skip_to(std::uint64_t index);
    void reset();

private:
    Room room_;
    int pairs_ = 0;
    int slots_ = 0;
    std::vector<int> xi_, yi_; // grid indices per slot
    bool exhausted_ = false;

    bool x_vector_admits_completion() const;
    bool first_y_vector();
    bool advance_y_vector();
    bool advance_x_vector();
    bool seek_first_valid();
    Deployment current() const;
};

// Shorthand that materializes the whole stream; intended for desk-scale
// grids only.
std::vector<Deployment> enumerate_placements(const Room& room, int pairs);

// Network distance extremes used by the closed-form capacity bound.
// Defaults: d_min = grid spacing, d_max = sqrt(5) * D (covers the room
// diagonal and a corner -> mid-wall array -> corner reflection). Explicit
// overrides are returned verbatim; d_min >= d_max is rejected.
std::pair<double, double> distance_extremes(
    const Room& room, const std::vector<ArrayLayout>& layouts,
    std::optional<double> d_min_override = std::nullopt,
    std::optional<double> d_max_override = std::nullopt);

} // namespace reflectsim
