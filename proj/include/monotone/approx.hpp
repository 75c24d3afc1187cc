#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "monotone/core.hpp"

namespace monotone {

inline constexpr std::size_t kDefaultGridBudget = 10'000'000;

// Uniform grid over [0,1]^d with spacing delta / sqrt(d), delta = eps / L.
// Each axis holds {k * spacing <= 1} and always ends at 1, so every point of
// the cube has a grid neighbour above it.
struct GridSpec {
  std::size_t dimension = 0;
  double lipschitz = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  double spacing = 0.0;
  std::vector<double> axis;
  // False when 1 was appended to the axis rather than hit by k * spacing.
  bool ends_on_lattice = true;

  std::size_t points_per_axis() const noexcept { return axis.size(); }
  // |(spacing Z) ∩ [0,1]|, without the appended endpoint.
  std::size_t lattice_points_per_axis() const noexcept {
    return ends_on_lattice ? axis.size() : axis.size() - 1;
  }
  std::size_t point_count() const;
  // (L sqrt(d) / eps)^d, the asymptotic count.
  double size_bound() const;
  std::size_t predicted_hidden_units() const { return (dimension + 2) * point_count(); }
  // Row-major enumeration: the last coordinate varies fastest.
  Point point(std::size_t flat_index) const;
};

// Throws InvalidArgument for d = 0, eps <= 0 or L < 0, GridTooLarge over budget.
// L = 0 gives the axis {0, 1}.
GridSpec plan_grid(std::size_t d, double lipschitz, double eps,
                   std::size_t budget = kDefaultGridBudget);

using Oracle = std::function<double(const Point&)>;

struct Approximation {
  GridSpec grid;
  ThresholdNetwork network;
  // Largest single-axis difference quotient between neighbouring grid samples;
  // a lower bound on the true Lipschitz constant.
  double empirical_lipschitz = 0.0;
  bool lipschitz_exceeded = false;
};

// Samples f on the grid and interpolates the samples with the four-layer
// construction. Throws MonotoneViolation when f is not monotone on the grid.
Approximation build_approximator(const Oracle& f, std::size_t d, double lipschitz, double eps,
                                 std::size_t budget = kDefaultGridBudget);

// Nearest grid points x_- <= x <= x_+ for x in [0,1]^d.
std::pair<Point, Point> grid_bracket(const GridSpec& grid, const Point& x);

struct NamedFunction {
  std::string name;
  Oracle f;
  // Euclidean Lipschitz constant on [0,1]^d (0 for constants).
  double lipschitz = 0.0;
};

// linear (sum of coordinates), mean, min, max, constant:c, sqrt[:eta]
// (sqrt(max(eta, mean)), eta defaults to 0.01). Throws InvalidArgument.
NamedFunction builtin_function(std::string_view spec, std::size_t d);

// Tabulated f: exact lookup of a grid point among the rows (coordinate match
// within 1e-9). Points absent from the table throw InvalidArgument.
Oracle tabulated_function(std::vector<LabeledPoint> rows);

struct ProbeResult {
  double sup_error = 0.0;
  Point worst;
  std::size_t probes = 0;
};

// Max |N(x) - f(x)| over uniform random probes in [0,1]^d.
ProbeResult probe_sup_error(const ThresholdNetwork& net, const Oracle& f, std::size_t probes,
                            std::uint64_t seed);

}  // namespace monotone
