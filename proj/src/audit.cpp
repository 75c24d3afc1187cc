#include "monotone/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "monotone/construct.hpp"
#include "monotone/random.hpp"

namespace monotone {

namespace {

std::vector<double> random_point(std::mt19937_64& rng, std::size_t d, double lo, double hi) {
  std::uniform_real_distribution<double> coord(lo, hi);
  std::vector<double> x(d);
  for (auto& c : x) c = coord(rng);
  return x;
}

nlohmann::json point_json(const Point& x) {
  return nlohmann::json(std::vector<double>(x.coords().begin(), x.coords().end()));
}

std::string rational_string(const Rational& v) { return v.str(); }

void require_relu_monotone(const ThresholdNetwork& net) {
  for (const auto& layer : net.layers())
    if (layer.activation() != Activation::Relu)
      throw Error(ErrorCode::ActivationMismatch, "network has a threshold layer");
  if (!net.is_monotone())
    throw Error(ErrorCode::PreconditionViolated, "network has negative weights");
}

// Merges one audit into a campaign summary, keeping the first failure.
void absorb(AuditReport& campaign, const AuditReport& single, std::uint64_t index) {
  if (!single.passed && campaign.passed) {
    campaign.passed = false;
    campaign.witness = {{"index", index}, {"report", to_json(single)}};
  }
}

}  // namespace

AuditReport certify_monotone_structure(const ThresholdNetwork& net) {
  AuditReport report{"structure", true};
  const auto& layers = net.layers();
  for (std::size_t l = 0; l < layers.size() && report.passed; ++l) {
    const auto& layer = layers[l];
    for (std::size_t u = 0; u < layer.units() && report.passed; ++u)
      for (std::size_t k = 0; k < layer.inputs(); ++k)
        if (layer.weight(u, k) < 0) {
          report.passed = false;
          report.witness = {{"layer", l}, {"unit", u}, {"index", k}, {"weight", layer.weight(u, k)}};
          break;
        }
  }
  const auto out = net.output_weights();
  for (std::size_t k = 0; k < out.size() && report.passed; ++k)
    if (out[k] < 0) {
      report.passed = false;
      report.witness = {{"layer", -1}, {"unit", 0}, {"index", k}, {"weight", out[k]}};
    }
  report.details = {{"layers", layers.size()}, {"hidden_units", net.hidden_units()}};
  return report;
}

AuditReport probe_monotonicity(const ThresholdNetwork& net, double lo, double hi,
                               std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "empty probe box");
  AuditReport report{"monotone", true, samples, seed};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t d = net.input_dimension();
  std::uniform_int_distribution<std::size_t> axis(0, d - 1);
  for (std::uint64_t s = 0; s < samples; ++s) {
    auto u = random_point(rng, d, lo, hi);
    auto v = u;
    // Alternate perturbing every coordinate and a single one.
    if (s % 2 == 0) {
      for (auto& c : v) c = std::min(hi, c + unit(rng) * (hi - c));
    } else {
      auto& c = v[axis(rng)];
      c = std::min(hi, c + unit(rng) * (hi - c));
    }
    const Point pu(std::move(u)), pv(std::move(v));
    const double nu = evaluate(net, pu);
    const double nv = evaluate(net, pv);
    if (nu > nv) {
      report.passed = false;
      report.witness = {{"sample", s}, {"u", point_json(pu)}, {"v", point_json(pv)},
                        {"N_u", nu}, {"N_v", nv}};
      break;
    }
  }
  report.details = {{"lo", lo}, {"hi", hi}};
  return report;
}

AuditReport relu_convexity_probe(const ThresholdNetwork& net, std::uint64_t triples,
                                 std::uint64_t seed, double lo, double hi) {
  require_relu_monotone(net);
  AuditReport report{"convexity", true, triples, seed};
  std::mt19937_64 rng(seed);
  const std::size_t d = net.input_dimension();
  double max_excess = -std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < triples; ++s) {
    const Point u(random_point(rng, d, lo, hi));
    const Point v(random_point(rng, d, lo, hi));
    std::vector<double> mid(d);
    for (std::size_t r = 0; r < d; ++r) mid[r] = 0.5 * (u[r] + v[r]);
    const Point m(std::move(mid));
    const double nu = evaluate(net, u), nv = evaluate(net, v), nm = evaluate(net, m);
    const double chord = 0.5 * (nu + nv);
    // Round-off allowance relative to the magnitudes involved.
    const double slack = 1e-9 * (1.0 + std::abs(nu) + std::abs(nv));
    max_excess = std::max(max_excess, nm - chord);
    if (nm > chord + slack && report.passed) {
      report.passed = false;
      report.witness = {{"sample", s}, {"u", point_json(u)}, {"v", point_json(v)},
                        {"N_mid", nm}, {"chord", chord}};
    }
  }
  report.details = {{"max_midpoint_excess", triples ? max_excess : 0.0}};
  return report;
}

GapWitness sqrt_gap_witness(const ThresholdNetwork& net, double resolution) {
  require_relu_monotone(net);
  if (net.input_dimension() != 1)
    throw Error(ErrorCode::DimensionMismatch, "sqrt gap search needs a one-dimensional network");
  if (!(resolution > 0.0 && resolution <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "resolution must lie in (0, 1]");
  const auto steps = static_cast<std::size_t>(std::llround(1.0 / resolution));
  GapWitness best{0.0, -1.0};
  for (std::size_t k = 0; k <= steps; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(steps);
    const double gap = std::abs(evaluate(net, Point{x}) - std::sqrt(x));
    if (gap > best.gap) best = {x, gap};
  }
  return best;
}

MonotoneDataset depth2_counterexample(std::size_t d) {
  if (d < 2) throw Error(ErrorCode::DimensionTooSmall, "counterexample needs d >= 2");
  std::vector<LabeledPoint> raw;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> x(d, 0.0);
    x[i] = static_cast<double>(d);
    raw.push_back({Point(std::move(x)), 0.0});
  }
  raw.push_back({Point(std::vector<double>(d, 1.0)), 1.0});
  return validate_dataset(raw);
}

AuditReport depth2_inequality_audit(const ThresholdNetwork& net, std::size_t d) {
  if (net.layers().size() != 1)
    throw Error(ErrorCode::ArchitectureMismatch, "expected exactly one hidden layer");
  if (net.layers()[0].activation() != Activation::Threshold)
    throw Error(ErrorCode::ArchitectureMismatch, "hidden layer must use threshold activation");
  if (net.input_dimension() != d)
    throw Error(ErrorCode::ArchitectureMismatch, "network input dimension differs from d");
  if (!net.is_monotone())
    throw Error(ErrorCode::ArchitectureMismatch, "network has negative weights");

  const MonotoneDataset ds = depth2_counterexample(d);
  const ExactNetwork exact = to_exact(net);
  const ExactNetwork shifted(exact.input_dimension(), exact.layers(),
                             std::vector<Rational>(exact.output_weights().begin(),
                                                   exact.output_weights().end()),
                             Rational(0));
  const Rational& bias = exact.output_bias();

  // The counterexample is canonical: the d axis points first, the all-ones point last.
  Rational lhs(0);
  bool interpolates = true;
  std::vector<std::string> values;
  for (std::size_t i = 0; i < d; ++i) {
    const Rational v = evaluate(shifted, ds.point(i));
    lhs += v;
    values.push_back(rational_string(v));
    interpolates = interpolates && (v + bias == 0);
  }
  const Rational rhs = evaluate(shifted, ds.point(d));
  values.push_back(rational_string(rhs));
  interpolates = interpolates && (rhs + bias == 1);

  AuditReport report{"depth2", lhs >= rhs, 1, 0};
  report.details = {{"d", d},
                    {"shifted_outputs", values},
                    {"lhs", rational_string(lhs)},
                    {"rhs", rational_string(rhs)},
                    {"interpolates", interpolates}};
  if (!report.passed) report.witness = report.details;
  return report;
}

ActivitySets activity_sets(const ThresholdNetwork& net, const MonotoneDataset& ds) {
  if (net.layers().empty())
    throw Error(ErrorCode::ArchitectureMismatch, "network has no hidden layer");
  if (net.input_dimension() != ds.dimension())
    throw Error(ErrorCode::DimensionMismatch, "network and dataset dimensions differ");
  const auto& first = net.layers().front();
  ActivitySets result;
  result.units = first.units();
  std::vector<double> out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    first.apply(ds.point(i).coords(), out);
    std::vector<std::size_t> active;
    for (std::size_t u = 0; u < out.size(); ++u)
      if (out[u] != 0.0) active.push_back(u);
    result.sets.push_back(std::move(active));
  }
  return result;
}

AuditReport chain_width_audit(const ThresholdNetwork& net, const MonotoneDataset& ds) {
  if (!is_totally_ordered(ds))
    throw Error(ErrorCode::PreconditionViolated, "dataset is not a chain");
  for (std::size_t i = 1; i < ds.size(); ++i)
    if (!(ds.label(i - 1) < ds.label(i)))
      throw Error(ErrorCode::PreconditionViolated, "chain labels are not strictly increasing");
  if (!net.is_monotone()) throw Error(ErrorCode::PreconditionViolated, "network is not monotone");
  if (net.layers().empty() || net.layers().front().activation() != Activation::Threshold)
    throw Error(ErrorCode::PreconditionViolated, "first layer must be a threshold layer");

  const ActivitySets acts = activity_sets(net, ds);
  const std::size_t n = ds.size();
  const std::size_t k = acts.units;

  bool chain = true;
  bool strict = true;
  std::size_t broken = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& a = acts.sets[i];
    const auto& b = acts.sets[i + 1];
    if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) {
      if (chain) broken = i;
      chain = false;
    }
    if (a.size() == b.size()) strict = false;
  }

  AuditReport report{"chain-width", chain, 1, 0};
  report.details = {{"n", n}, {"first_layer_units", k}, {"chain", chain},
                    {"strictly_ascending", chain && strict}, {"activity_sets", acts.sets}};
  if (!chain) {
    report.witness = {{"i", broken}, {"I_i", acts.sets[broken]}, {"I_next", acts.sets[broken + 1]}};
    return report;
  }
  if (k >= n) return report;

  // Pigeonhole: look for equal neighbouring activity sets.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (acts.sets[i] != acts.sets[i + 1]) continue;
    std::vector<double> first_i, first_next;
    net.layers().front().apply(ds.point(i).coords(), first_i);
    net.layers().front().apply(ds.point(i + 1).coords(), first_next);
    const double out_i = evaluate(net, ds.point(i));
    const double out_next = evaluate(net, ds.point(i + 1));
    const bool confirmed = first_i == first_next && out_i == out_next;
    report.witness = {{"i", i}, {"first_layer_equal", first_i == first_next},
                      {"N_i", out_i}, {"N_next", out_next}, {"y_i", ds.label(i)},
                      {"y_next", ds.label(i + 1)}, {"interpolates", false}};
    report.passed = confirmed;
    return report;
  }
  // k < n yet every step adds a unit: only possible when k = n - 1 and I_1 is
  // empty. The network may then separate every neighbouring pair.
  report.passed = false;
  bool distinct_outputs = true;
  for (std::size_t i = 0; i + 1 < n; ++i)
    distinct_outputs = distinct_outputs && evaluate(net, ds.point(i)) != evaluate(net, ds.point(i + 1));
  report.witness = {{"reason", "no repeated activity set with fewer than n first-layer units"},
                    {"activity_sets", acts.sets}, {"neighbour_outputs_distinct", distinct_outputs}};
  return report;
}

AuditReport depth2_campaign(std::size_t d, std::uint64_t nets, std::uint64_t seed,
                            std::size_t max_width) {
  AuditReport campaign{"depth2", true, nets, seed};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> width(1, max_width);
  const double bias_range = static_cast<double>(d * d);  // d * largest coordinate
  std::uint64_t interpolating = 0;
  std::uint64_t tight = 0;
  for (std::uint64_t s = 0; s < nets; ++s) {
    const std::size_t w = width(rng);
    const auto net = random_monotone_network(rng, d, std::span(&w, 1), Activation::Threshold, bias_range);
    AuditReport single = depth2_inequality_audit(net, d);
    if (single.details["interpolates"].get<bool>()) {
      ++interpolating;
      single.passed = false;
      single.witness = single.details;
    }
    if (single.details["lhs"] == single.details["rhs"]) ++tight;
    absorb(campaign, single, s);
  }
  campaign.details = {{"d", d}, {"interpolating", interpolating}, {"tight", tight},
                      {"max_width", max_width}};
  return campaign;
}

AuditReport convexity_campaign(std::uint64_t nets, std::uint64_t seed, std::uint64_t triples_per_net) {
  AuditReport campaign{"convexity", true, nets, seed};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> depth(0, 3);
  std::uniform_int_distribution<std::size_t> width(1, 8);
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < nets; ++s) {
    std::vector<std::size_t> widths(depth(rng));
    for (auto& w : widths) w = width(rng);
    const auto net = random_monotone_network(rng, 1, widths, Activation::Relu, 1.0);
    AuditReport single = relu_convexity_probe(net, triples_per_net, rng());
    const GapWitness gap = sqrt_gap_witness(net);
    min_gap = std::min(min_gap, gap.gap);
    single.details["sqrt_gap"] = gap.gap;
    single.details["sqrt_gap_x"] = gap.x;
    if (gap.gap < 0.125 - 1e-12) {
      single.passed = false;
      single.witness = {{"sqrt_gap", gap.gap}, {"x", gap.x}};
    }
    absorb(campaign, single, s);
  }
  campaign.details = {{"min_sqrt_gap", nets ? min_gap : 0.0}, {"triples_per_net", triples_per_net}};
  return campaign;
}

AuditReport chain_width_campaign(std::uint64_t nets, std::uint64_t seed, std::size_t first_width_slack) {
  AuditReport campaign{"chain-width", true, nets, seed};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  std::uniform_int_distribution<std::size_t> extra_depth(0, 2);
  std::uniform_int_distribution<std::size_t> extra_width(1, 8);
  const std::size_t min_n = first_width_slack + 1;
  std::uniform_int_distribution<std::size_t> size(std::max<std::size_t>(min_n, 2), 12);
  std::uint64_t confirmed = 0;
  std::uint64_t constructed_strict = 0;
  for (std::uint64_t s = 0; s < nets; ++s) {
    const std::size_t n = size(rng);
    const std::size_t d = dim(rng);
    const MonotoneDataset ds = random_chain_dataset(rng, n, d);
    double max_abs = 0.0;
    for (const auto& sample : ds.samples())
      for (double c : sample.x.coords()) max_abs = std::max(max_abs, std::abs(c));

    std::uniform_int_distribution<std::size_t> first(1, n - first_width_slack);
    std::vector<std::size_t> widths{first(rng)};
    for (std::size_t e = extra_depth(rng); e > 0; --e) widths.push_back(extra_width(rng));
    const auto net = random_monotone_network(rng, d, widths, Activation::Threshold,
                                             static_cast<double>(d) * max_abs);
    const AuditReport single = chain_width_audit(net, ds);
    if (single.passed) ++confirmed;
    absorb(campaign, single, s);

    const Interpolant built = build_chain_interpolator(ds);
    AuditReport own = chain_width_audit(built.network, ds);
    const bool strict = own.details["strictly_ascending"].get<bool>() &&
                        own.details["first_layer_units"].get<std::size_t>() == n;
    if (strict) ++constructed_strict;
    if (!strict) {
      own.passed = false;
      own.witness = own.details;
    }
    absorb(campaign, own, s);
  }
  campaign.details = {{"confirmed_witnesses", confirmed},
                      {"constructed_strictly_ascending", constructed_strict},
                      {"first_width_slack", first_width_slack}};
  return campaign;
}

}  // namespace monotone
