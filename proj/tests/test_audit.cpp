#include <doctest.h>

#include <algorithm>
#include <random>

#include "monotone/audit.hpp"
#include "monotone/construct.hpp"
#include "monotone/random.hpp"

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

MonotoneDataset dataset(std::initializer_list<std::pair<std::vector<double>, double>> rows) {
  std::vector<LabeledPoint> raw;
  for (const auto& [x, y] : rows) raw.push_back({Point(x), y});
  return validate_dataset(raw);
}

ThresholdNetwork relu_identity() {
  return ThresholdNetwork(1, {ThresholdLayer(1, 1, {1.0}, {0.0}, Activation::Relu)}, {1.0}, 0.0);
}

}  // namespace

TEST_CASE("structure certificate") {
  std::mt19937_64 rng(1);
  const auto ds = random_monotone_dataset(rng, 10, 3);
  CHECK(certify_monotone_structure(build_interpolator(ds).network).passed);

  ThresholdNetwork bad(2, {ThresholdLayer(2, 2, {1.0, 0.5, 0.2, -0.1}, {0, 0})}, {1.0, 1.0}, 0.0);
  const auto r = certify_monotone_structure(bad);
  CHECK_FALSE(r.passed);
  CHECK(r.witness["layer"] == 0);
  CHECK(r.witness["unit"] == 1);
  CHECK(r.witness["index"] == 1);
  CHECK(r.witness["weight"] == -0.1);

  ThresholdNetwork bad_out(1, {ThresholdLayer(1, 2, {1, 1}, {0, 0})}, {1.0, -2.0}, 0.0);
  const auto o = certify_monotone_structure(bad_out);
  CHECK_FALSE(o.passed);
  CHECK(o.witness["layer"] == -1);
  CHECK(o.witness["index"] == 1);

  ThresholdNetwork zero(2, {ThresholdLayer(2, 2, {0, 0, 0, 0}, {1, -1})}, {0.0, 0.0}, 3.0);
  CHECK(certify_monotone_structure(zero).passed);
}

TEST_CASE("monotonicity probe") {
  ThresholdNetwork neg(1, {ThresholdLayer(1, 1, {-1.0}, {0.5})}, {1.0}, 0.0);
  const auto r = probe_monotonicity(neg, 0.0, 1.0, 1000, 9);
  REQUIRE_FALSE(r.passed);
  const double u = r.witness["u"][0], v = r.witness["v"][0];
  CHECK(u <= 0.5);
  CHECK(v > 0.5);
  CHECK(u <= v);
  CHECK(r.witness["N_u"] == 1.0);
  CHECK(r.witness["N_v"] == 0.0);

  ThresholdNetwork constant(3, {}, {0, 0, 0}, 2.0);
  CHECK(probe_monotonicity(constant, -1, 1, 500, 0).passed);
  CHECK(code_of([&] { probe_monotonicity(constant, 1, 1, 10, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("property: certified structure implies the probe passes") {
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t d = 1 + rng() % 4;
    std::vector<std::size_t> widths(1 + rng() % 3);
    for (auto& w : widths) w = 1 + rng() % 8;
    const auto net = random_monotone_network(rng, d, widths,
                                             seed % 2 ? Activation::Relu : Activation::Threshold, 2.0);
    REQUIRE(certify_monotone_structure(net).passed);
    CHECK(probe_monotonicity(net, -2, 2, 300, seed).passed);
  }
}

TEST_CASE("convexity probe") {
  const auto id = relu_identity();
  CHECK(evaluate(id, Point{0.0}) <= 0.5 * (evaluate(id, Point{-1.0}) + evaluate(id, Point{1.0})));
  CHECK(relu_convexity_probe(id, 200, 1).passed);

  ThresholdNetwork affine(2, {}, {0.25, 3.0}, -1.0);
  const auto r = relu_convexity_probe(affine, 200, 2);
  CHECK(r.passed);
  CHECK(std::abs(r.details["max_midpoint_excess"].get<double>()) < 1e-12);

  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::vector<std::size_t> widths(1 + rng() % 3);
    for (auto& w : widths) w = 1 + rng() % 8;
    const auto net = random_monotone_network(rng, 1 + rng() % 3, widths, Activation::Relu, 1.0);
    CHECK(relu_convexity_probe(net, 100, seed).passed);
  }

  ThresholdNetwork step(1, {ThresholdLayer(1, 1, {1.0}, {0.0})}, {1.0}, 0.0);
  CHECK(code_of([&] { relu_convexity_probe(step, 10, 0); }) == ErrorCode::ActivationMismatch);
  ThresholdNetwork neg(1, {ThresholdLayer(1, 1, {-1.0}, {0.0}, Activation::Relu)}, {1.0}, 0.0);
  CHECK(code_of([&] { relu_convexity_probe(neg, 10, 0); }) == ErrorCode::PreconditionViolated);
}

TEST_CASE("sqrt gap witness") {
  const auto chord = sqrt_gap_witness(relu_identity());
  CHECK(chord.x == 0.25);
  CHECK(chord.gap == 0.25);
  ThresholdNetwork zero(1, {ThresholdLayer(1, 1, {0.0}, {0.0}, Activation::Relu)}, {0.0}, 0.0);
  const auto z = sqrt_gap_witness(zero);
  CHECK(z.x == 1.0);
  CHECK(z.gap == 1.0);

  std::mt19937_64 rng(100);
  for (int seed = 0; seed < 100; ++seed) {
    std::vector<std::size_t> widths(1 + rng() % 3);
    for (auto& w : widths) w = 1 + rng() % 8;
    const auto net = random_monotone_network(rng, 1, widths, Activation::Relu, 1.0);
    CHECK(sqrt_gap_witness(net).gap >= 0.125);
  }
  CHECK(code_of([] { sqrt_gap_witness(relu_identity(), 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("best convex fits still miss sqrt by 1/8") {
  // x + 1/8 balances the gaps at 0, 1/4 and 1.
  ThresholdNetwork fit(1, {ThresholdLayer(1, 1, {1.0}, {0.0}, Activation::Relu)}, {1.0}, 0.125);
  const auto g = sqrt_gap_witness(fit);
  CHECK(g.gap == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("depth-2 counterexample datasets") {
  const auto two = depth2_counterexample(2);
  CHECK(two == dataset({{{2, 0}, 0}, {{0, 2}, 0}, {{1, 1}, 1}}));
  const auto three = depth2_counterexample(3);
  CHECK(three == dataset({{{3, 0, 0}, 0}, {{0, 3, 0}, 0}, {{0, 0, 3}, 0}, {{1, 1, 1}, 1}}));
  const auto five = depth2_counterexample(5);
  CHECK(validate_dataset(five.samples()) == five);
  CHECK_FALSE(is_totally_ordered(five));
  CHECK(code_of([] { depth2_counterexample(1); }) == ErrorCode::DimensionTooSmall);
}

TEST_CASE("depth-2 inequality audit") {
  ThresholdNetwork zero(2, {ThresholdLayer(2, 1, {0, 0}, {-1})}, {0.0}, 0.0);
  const auto z = depth2_inequality_audit(zero, 2);
  CHECK(z.passed);
  CHECK(z.details["lhs"] == "0");
  CHECK(z.details["rhs"] == "0");

  ThresholdNetwork sum(2, {ThresholdLayer(2, 1, {1, 1}, {-2})}, {1.0}, 0.0);
  const auto s = depth2_inequality_audit(sum, 2);
  CHECK(s.passed);
  CHECK(s.details["shifted_outputs"] == nlohmann::json({"1", "1", "1"}));
  CHECK(s.details["lhs"] == "2");
  CHECK(s.details["rhs"] == "1");
  CHECK(s.details["interpolates"] == false);

  // The output bias is removed before comparing.
  ThresholdNetwork biased(2, {ThresholdLayer(2, 1, {1, 1}, {-2})}, {1.0}, -5.0);
  CHECK(depth2_inequality_audit(biased, 2).details["lhs"] == "2");

  const auto general = build_interpolator(depth2_counterexample(2)).network;
  CHECK(code_of([&] { depth2_inequality_audit(general, 2); }) == ErrorCode::ArchitectureMismatch);
  ThresholdNetwork relu(2, {ThresholdLayer(2, 1, {1, 1}, {-2}, Activation::Relu)}, {1.0}, 0.0);
  CHECK(code_of([&] { depth2_inequality_audit(relu, 2); }) == ErrorCode::ArchitectureMismatch);
  CHECK(code_of([&] { depth2_inequality_audit(sum, 3); }) == ErrorCode::ArchitectureMismatch);
}

TEST_CASE("depth-2 campaigns never falsify") {
  for (std::size_t d : {2, 3, 4}) {
    const auto r = depth2_campaign(d, 300, 40 + d);
    CHECK(r.passed);
    CHECK(r.samples == 300);
    CHECK(r.details["interpolating"] == 0);
  }
}

TEST_CASE("chain-width audit on constructed networks") {
  std::mt19937_64 rng(5);
  const auto ds = random_chain_dataset(rng, 5, 3);
  const auto net = build_chain_interpolator(ds).network;
  const auto r = chain_width_audit(net, ds);
  CHECK(r.passed);
  CHECK(r.details["first_layer_units"] == 5);
  CHECK(r.details["strictly_ascending"] == true);

  const auto single = dataset({{{1, 2}, 0.5}});
  CHECK(chain_width_audit(build_chain_interpolator(single).network, single).passed);
}

TEST_CASE("chain-width audit finds the pigeonhole pair with two first-layer units") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ds = random_chain_dataset(rng, 4, 2);
    const std::size_t widths[] = {2, 1 + rng() % 4};
    const auto net = random_monotone_network(rng, 2, widths, Activation::Threshold, 4.0);
    const auto r = chain_width_audit(net, ds);
    CHECK(r.passed);
    const std::size_t i = r.witness["i"];
    CHECK(r.witness["N_i"] == r.witness["N_next"]);
    CHECK(r.details["activity_sets"][i] == r.details["activity_sets"][i + 1]);
  }
}

TEST_CASE("k = n - 1 first-layer units can still interpolate a chain") {
  // sigma(x - 1) and sigma(x - 2) separate 0 < 1 < 2.
  const auto ds = dataset({{{0}, 0}, {{1}, 1}, {{2}, 2}});
  ThresholdNetwork net(1, {ThresholdLayer(1, 2, {1, 1}, {-1, -2})}, {1, 1}, 0.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(evaluate(net, ds.point(i)) == ds.label(i));
  const auto r = chain_width_audit(net, ds);
  CHECK_FALSE(r.passed);
  CHECK(r.witness["neighbour_outputs_distinct"] == true);
}

TEST_CASE("property: activity sets ascend along chains") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + rng() % 4;
    const auto ds = random_chain_dataset(rng, 2 + rng() % 10, d, false);
    std::vector<std::size_t> widths(1 + rng() % 2);
    for (auto& w : widths) w = 1 + rng() % 10;
    const auto net = random_monotone_network(rng, d, widths, Activation::Threshold, 3.0);
    const auto acts = activity_sets(net, ds);
    for (std::size_t i = 0; i + 1 < ds.size(); ++i)
      CHECK(std::includes(acts.sets[i + 1].begin(), acts.sets[i + 1].end(), acts.sets[i].begin(),
                          acts.sets[i].end()));
  }
}

TEST_CASE("chain-width preconditions") {
  const auto chain = dataset({{{0}, 0}, {{1}, 1}});
  ThresholdNetwork good(1, {ThresholdLayer(1, 1, {1}, {0})}, {1}, 0.0);
  CHECK(code_of([&] { chain_width_audit(good, depth2_counterexample(2)); }) ==
        ErrorCode::PreconditionViolated);
  CHECK(code_of([&] { chain_width_audit(good, dataset({{{0}, 1}, {{1}, 1}})); }) ==
        ErrorCode::PreconditionViolated);
  ThresholdNetwork neg(1, {ThresholdLayer(1, 1, {-1}, {0})}, {1}, 0.0);
  CHECK(code_of([&] { chain_width_audit(neg, chain); }) == ErrorCode::PreconditionViolated);
  ThresholdNetwork relu(1, {ThresholdLayer(1, 1, {1}, {0}, Activation::Relu)}, {1}, 0.0);
  CHECK(code_of([&] { chain_width_audit(relu, chain); }) == ErrorCode::PreconditionViolated);
}

TEST_CASE("small campaigns pass") {
  CHECK(convexity_campaign(50, 1).passed);
  CHECK(chain_width_campaign(30, 2).passed);
}
