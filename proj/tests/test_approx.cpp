#include <doctest.h>

#include <cmath>
#include <random>

#include "monotone/approx.hpp"

using namespace monotone;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("plan_grid: exact quarter spacing") {
  const auto g = plan_grid(1, 1.0, 0.25);
  CHECK(g.spacing == 0.25);
  CHECK(g.axis == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(g.point_count() == 5);
  CHECK(g.ends_on_lattice);
}

TEST_CASE("plan_grid: d=2, coarse spacing keeps the upper endpoint") {
  const auto g = plan_grid(2, 1.0, 1.0);
  CHECK(g.spacing == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(g.lattice_points_per_axis() == 2);
  CHECK(g.points_per_axis() == 3);
  CHECK(g.point_count() == 9);
  CHECK(g.axis.back() == 1.0);
  CHECK_FALSE(g.ends_on_lattice);
}

TEST_CASE("plan_grid: spacing beyond the cube") {
  const auto g = plan_grid(1, 1.0, 2.0);
  CHECK(g.spacing == 2.0);
  CHECK(g.axis == std::vector<double>{0, 1});
  CHECK(g.lattice_points_per_axis() == 1);
}

TEST_CASE("plan_grid: zero Lipschitz constant") {
  const auto g = plan_grid(3, 0.0, 0.1);
  CHECK(g.axis == std::vector<double>{0, 1});
  CHECK(g.point_count() == 8);
}

TEST_CASE("plan_grid: snapping near 1 and row-major order") {
  // 0.1 * 10 rounds to 1 within the snap tolerance.
  const auto g = plan_grid(2, 1.0, 0.1 * std::sqrt(2.0));
  CHECK(g.axis.size() == 11);
  CHECK(g.axis.back() == 1.0);
  CHECK(g.point(0) == Point{0, 0});
  CHECK(g.point(1) == Point{0, g.axis[1]});
  CHECK(g.point(11) == Point{g.axis[1], 0});
  CHECK(g.predicted_hidden_units() == 4 * 121);
  for (std::size_t k = 1; k + 1 < g.axis.size(); ++k)
    CHECK(std::abs(g.axis[k] - g.axis[k - 1] - g.spacing) < 1e-12);
}

TEST_CASE("plan_grid: argument and budget errors") {
  CHECK(code_of([] { plan_grid(0, 1, 0.1); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { plan_grid(1, -1, 0.1); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { plan_grid(1, 1, 0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { plan_grid(1, 1, std::nan("")); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { plan_grid(3, 1, 0.01, 1000); }) == ErrorCode::GridTooLarge);
  CHECK(code_of([] { plan_grid(1, 1, 1e-300, 1000); }) == ErrorCode::GridTooLarge);
  CHECK_NOTHROW(plan_grid(2, 1, 0.1, 1000));
}

TEST_CASE("build_approximator: identity staircase") {
  const auto a = build_approximator([](const Point& x) { return x[0]; }, 1, 1.0, 0.25);
  CHECK(a.network.hidden_units() == 3 * 5);
  CHECK(a.network.hidden_units() == a.grid.predicted_hidden_units());
  const auto probe = probe_sup_error(a.network, [](const Point& x) { return x[0]; }, 1000, 3);
  CHECK(probe.sup_error <= 0.25);
  CHECK(evaluate(a.network, Point{0.6}) == 0.5);
  CHECK(evaluate(a.network, Point{1.0}) == 1.0);
  CHECK(a.empirical_lipschitz == doctest::Approx(1.0));
  CHECK_FALSE(a.lipschitz_exceeded);
}

TEST_CASE("build_approximator: constant is reproduced exactly") {
  const auto f = builtin_function("constant:0.7", 2);
  CHECK(f.lipschitz == 0.0);
  const auto a = build_approximator(f.f, 2, f.lipschitz, 0.1);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < 1000; ++s) CHECK(evaluate(a.network, Point{unit(rng), unit(rng)}) == 0.7);
  CHECK(evaluate(a.network, Point{0, 0}) == 0.7);
  CHECK(evaluate(a.network, Point{1, 1}) == 0.7);
}

TEST_CASE("build_approximator: mean of two coordinates") {
  auto f = [](const Point& x) { return (x[0] + x[1]) / 2; };
  const auto a = build_approximator(f, 2, 1.0, 0.2);
  CHECK(probe_sup_error(a.network, f, 10000, 5).sup_error <= 0.2);
}

TEST_CASE("build_approximator rejects non-monotone samples") {
  CHECK(code_of([] { build_approximator([](const Point& x) { return -x[0]; }, 1, 1.0, 0.25); }) ==
        ErrorCode::MonotoneViolation);
}

TEST_CASE("declared Lipschitz constant below the sampled slope is flagged") {
  const auto a = build_approximator([](const Point& x) { return 3 * x[0]; }, 1, 1.0, 0.25);
  CHECK(a.lipschitz_exceeded);
  CHECK(a.empirical_lipschitz == doctest::Approx(3.0));
}

TEST_CASE("property: sandwich f(x-) <= N(x) <= f(x+) and the error bound") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const char* name : {"linear", "mean", "min", "max", "sqrt", "sqrt:0.09", "constant:-1.5"}) {
    for (std::size_t d : {1, 2, 3}) {
      for (double eps : {0.1, 0.25, 0.5}) {
        const auto f = builtin_function(name, d);
        if (plan_grid(d, f.lipschitz, eps).point_count() > 600) continue;
        const Approximation a = build_approximator(f.f, d, f.lipschitz, eps);
        CHECK(a.network.hidden_units() == (d + 2) * a.grid.point_count());
        CHECK_FALSE(a.lipschitz_exceeded);
        for (int s = 0; s < 300; ++s) {
          std::vector<double> x(d);
          for (auto& c : x) c = s % 5 == 0 ? a.grid.axis[rng() % a.grid.axis.size()] : unit(rng);
          const Point p(x);
          const auto [lo, hi] = grid_bracket(a.grid, p);
          CHECK(dominated_by(lo, p));
          CHECK(dominated_by(p, hi));
          const double n = evaluate(a.network, p);
          // output increments are rounded once each
          const double slack = 1e-12 * (1 + std::abs(n));
          CHECK(f.f(lo) <= n + slack);
          CHECK(n <= f.f(hi) + slack);
          CHECK(std::abs(n - f.f(p)) <= eps);
        }
      }
    }
  }
}

TEST_CASE("builtin functions") {
  const auto lin = builtin_function("linear", 4);
  CHECK(lin.lipschitz == doctest::Approx(2.0));
  CHECK(lin.f(Point{1, 2, 3, 4}) == 10.0);
  CHECK(builtin_function("mean", 4).f(Point{1, 2, 3, 4}) == 2.5);
  CHECK(builtin_function("mean", 4).lipschitz == doctest::Approx(0.5));
  CHECK(builtin_function("min", 3).f(Point{0.2, 0.1, 0.3}) == 0.1);
  CHECK(builtin_function("max", 3).f(Point{0.2, 0.1, 0.3}) == 0.3);
  const auto sq = builtin_function("sqrt:0.04", 1);
  CHECK(sq.f(Point{0.0}) == doctest::Approx(0.2));
  CHECK(sq.f(Point{0.25}) == doctest::Approx(0.5));
  CHECK(sq.lipschitz == doctest::Approx(2.5));
  CHECK(code_of([] { builtin_function("cosine", 1); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { builtin_function("constant:abc", 1); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { builtin_function("sqrt:0", 1); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { builtin_function("mean", 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("tabulated functions look up grid points") {
  std::vector<LabeledPoint> rows;
  const auto g = plan_grid(2, 1.0, 0.5);
  for (std::size_t i = 0; i < g.point_count(); ++i) {
    const Point x = g.point(i);
    rows.push_back({x, x[0] * x[1]});
  }
  const auto f = tabulated_function(rows);
  CHECK(f(Point{1, 1}) == 1.0);
  CHECK(f(Point{g.axis[1] + 1e-12, 1}) == g.axis[1]);
  CHECK(code_of([&] { f(Point{0.123, 0.5}); }) == ErrorCode::InvalidArgument);
  const auto a = build_approximator(f, 2, 1.0, 0.5);
  for (const auto& row : rows) CHECK(std::abs(evaluate(a.network, row.x) - row.y) <= 1e-12);
  CHECK(code_of([] { tabulated_function({}); }) == ErrorCode::EmptyDataset);
}

TEST_CASE("asymptotic size formula") {
  const auto g = plan_grid(2, 2.0, 0.5);
  CHECK(g.size_bound() == doctest::Approx(std::pow(2.0 * std::sqrt(2.0) / 0.5, 2)));
}
