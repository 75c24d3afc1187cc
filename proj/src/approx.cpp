#include "monotone/approx.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "monotone/construct.hpp"

namespace monotone {

namespace {

constexpr double kAxisSnap = 1e-12;

std::vector<double> axis_points(double spacing, bool& ends_on_lattice) {
  std::vector<double> axis;
  ends_on_lattice = true;
  for (std::size_t k = 0;; ++k) {
    const double v = k == 0 ? 0.0 : static_cast<double>(k) * spacing;
    if (v > 1.0 + kAxisSnap) break;
    axis.push_back(std::min(v, 1.0));
    if (v >= 1.0 - kAxisSnap) break;
  }
  if (axis.back() >= 1.0 - kAxisSnap)
    axis.back() = 1.0;
  else {
    axis.push_back(1.0);
    ends_on_lattice = false;
  }
  return axis;
}

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
    throw Error(ErrorCode::InvalidArgument, "invalid " + std::string(what) + ": '" + std::string(text) + "'");
  return v;
}

}  // namespace

std::size_t GridSpec::point_count() const {
  std::size_t count = 1;
  for (std::size_t r = 0; r < dimension; ++r) count *= axis.size();
  return count;
}

double GridSpec::size_bound() const {
  return std::pow(lipschitz * std::sqrt(static_cast<double>(dimension)) / eps,
                  static_cast<double>(dimension));
}

Point GridSpec::point(std::size_t flat_index) const {
  std::vector<double> coords(dimension);
  for (std::size_t r = dimension; r-- > 0;) {
    coords[r] = axis[flat_index % axis.size()];
    flat_index /= axis.size();
  }
  return Point(std::move(coords));
}

GridSpec plan_grid(std::size_t d, double lipschitz, double eps, std::size_t budget) {
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "grid dimension must be >= 1");
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz))
    throw Error(ErrorCode::InvalidArgument, "Lipschitz constant must be finite and >= 0");
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw Error(ErrorCode::InvalidArgument, "eps must be positive");

  GridSpec grid;
  grid.dimension = d;
  grid.lipschitz = lipschitz;
  grid.eps = eps;
  // L = 0: a constant needs only the corners {0, 1} per axis.
  grid.delta = lipschitz == 0.0 ? std::numeric_limits<double>::infinity() : eps / lipschitz;
  grid.spacing = grid.delta / std::sqrt(static_cast<double>(d));
  // Reject before materialising an axis that is itself over budget.
  if (1.0 / grid.spacing > static_cast<double>(budget))
    throw Error(ErrorCode::GridTooLarge, "grid axis exceeds the point budget");
  grid.axis = axis_points(grid.spacing, grid.ends_on_lattice);

  std::size_t count = 1;
  for (std::size_t r = 0; r < d; ++r) {
    if (count > budget / grid.axis.size())
      throw Error(ErrorCode::GridTooLarge,
                  "grid has more than " + std::to_string(budget) + " points");
    count *= grid.axis.size();
  }
  return grid;
}

Approximation build_approximator(const Oracle& f, std::size_t d, double lipschitz, double eps,
                                 std::size_t budget) {
  GridSpec grid = plan_grid(d, lipschitz, eps, budget);
  const std::size_t count = grid.point_count();
  const std::size_t m = grid.points_per_axis();

  std::vector<LabeledPoint> samples;
  samples.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    Point x = grid.point(idx);
    const double y = f(x);
    samples.push_back({std::move(x), y});
  }

  // Neighbours along axis r are `stride` apart in row-major order.
  double empirical = 0.0;
  std::size_t stride = 1;
  for (std::size_t r = d; r-- > 0;) {
    for (std::size_t idx = 0; idx < count; ++idx) {
      const std::size_t k = (idx / stride) % m;
      if (k + 1 == m) continue;
      const double step = grid.axis[k + 1] - grid.axis[k];
      const double diff = std::abs(samples[idx + stride].y - samples[idx].y);
      empirical = std::max(empirical, diff / step);
    }
    stride *= m;
  }

  const MonotoneDataset ds = validate_dataset(samples);
  Interpolant built = build_interpolator(ds);
  Approximation result{std::move(grid), std::move(built.network), empirical, false};
  result.lipschitz_exceeded = empirical > lipschitz * (1.0 + 1e-9);
  return result;
}

std::pair<Point, Point> grid_bracket(const GridSpec& grid, const Point& x) {
  if (x.dimension() != grid.dimension)
    throw Error(ErrorCode::DimensionMismatch, "probe dimension does not match grid");
  std::vector<double> lo(grid.dimension), hi(grid.dimension);
  for (std::size_t r = 0; r < grid.dimension; ++r) {
    const double v = std::clamp(x[r], 0.0, 1.0);
    auto it = std::upper_bound(grid.axis.begin(), grid.axis.end(), v);
    lo[r] = *std::prev(it);
    auto up = std::lower_bound(grid.axis.begin(), grid.axis.end(), v);
    hi[r] = *up;
  }
  return {Point(std::move(lo)), Point(std::move(hi))};
}

NamedFunction builtin_function(std::string_view spec, std::size_t d) {
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  const double dd = static_cast<double>(d);
  const double root_d = std::sqrt(dd);

  auto sum = [](const Point& x) {
    return std::accumulate(x.coords().begin(), x.coords().end(), 0.0);
  };

  if (name == "linear" && arg.empty()) return {"linear", sum, root_d};
  if (name == "mean" && arg.empty())
    return {"mean", [sum, dd](const Point& x) { return sum(x) / dd; }, 1.0 / root_d};
  if (name == "min" && arg.empty())
    return {"min", [](const Point& x) { return *std::min_element(x.coords().begin(), x.coords().end()); }, 1.0};
  if (name == "max" && arg.empty())
    return {"max", [](const Point& x) { return *std::max_element(x.coords().begin(), x.coords().end()); }, 1.0};
  if (name == "constant") {
    const double c = parse_number(arg, "constant");
    return {std::string(spec), [c](const Point&) { return c; }, 0.0};
  }
  if (name == "sqrt") {
    const double eta = arg.empty() ? 0.01 : parse_number(arg, "sqrt floor");
    if (!(eta > 0.0) || eta > 1.0)
      throw Error(ErrorCode::InvalidArgument, "sqrt floor must lie in (0, 1]");
    return {std::string(spec),
            [sum, dd, eta](const Point& x) { return std::sqrt(std::max(eta, sum(x) / dd)); },
            1.0 / (2.0 * std::sqrt(eta) * root_d)};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown function '" + std::string(spec) + "'");
}

Oracle tabulated_function(std::vector<LabeledPoint> rows) {
  if (rows.empty()) throw Error(ErrorCode::EmptyDataset, "function table is empty");
  std::sort(rows.begin(), rows.end(), [](const LabeledPoint& a, const LabeledPoint& b) {
    return std::lexicographical_compare(a.x.coords().begin(), a.x.coords().end(),
                                        b.x.coords().begin(), b.x.coords().end());
  });
  return [rows = std::move(rows)](const Point& x) {
    constexpr double tol = 1e-9;
    auto close = [&](const LabeledPoint& row) {
      for (std::size_t r = 0; r < x.dimension(); ++r)
        if (std::abs(row.x[r] - x[r]) > tol) return false;
      return true;
    };
    // Rows sorted lexicographically: start from the first row whose leading
    // coordinate could match.
    auto it = std::lower_bound(rows.begin(), rows.end(), x[0] - tol,
                               [](const LabeledPoint& row, double v) { return row.x[0] < v; });
    for (; it != rows.end() && it->x[0] <= x[0] + tol; ++it)
      if (it->x.dimension() == x.dimension() && close(*it)) return it->y;
    throw Error(ErrorCode::InvalidArgument, "function table has no row for a grid point");
  };
}

ProbeResult probe_sup_error(const ThresholdNetwork& net, const Oracle& f, std::size_t probes,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ProbeResult result;
  result.probes = probes;
  const std::size_t d = net.input_dimension();
  std::vector<double> coords(d);
  for (std::size_t s = 0; s < probes; ++s) {
    for (auto& c : coords) c = unit(rng);
    Point x(coords);
    const double err = std::abs(evaluate(net, x) - f(x));
    if (err > result.sup_error || result.worst.dimension() == 0) {
      result.sup_error = std::max(result.sup_error, err);
      result.worst = x;
    }
  }
  return result;
}

}  // namespace monotone
