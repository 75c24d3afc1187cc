#include "monotone/random.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

namespace monotone {

ThresholdNetwork random_monotone_network(std::mt19937_64& rng, std::size_t input_dimension,
                                         std::span<const std::size_t> widths,
                                         Activation activation, double bias_range) {
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  std::uniform_real_distribution<double> bias(-bias_range, bias_range);
  std::uniform_real_distribution<double> out_bias(-1.0, 1.0);
  std::vector<ThresholdLayer> layers;
  std::size_t in = input_dimension;
  for (std::size_t units : widths) {
    std::vector<double> w(units * in), b(units);
    for (auto& v : w) v = weight(rng);
    for (auto& v : b) v = bias(rng);
    layers.emplace_back(in, units, std::move(w), std::move(b), activation);
    in = units;
  }
  std::vector<double> out(in);
  for (auto& v : out) v = weight(rng);
  return ThresholdNetwork(input_dimension, std::move(layers), std::move(out), out_bias(rng));
}

MonotoneDataset random_monotone_dataset(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool lattice = unit(rng) < 0.5;
  const int side = 2 + static_cast<int>(unit(rng) * 4.0);
  std::uniform_int_distribution<int> lattice_coord(0, side);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);

  std::set<std::vector<double>> seen;
  std::vector<std::vector<double>> pts;
  // Bounded rejection: a tiny lattice may hold fewer than n points.
  for (std::size_t attempt = 0; pts.size() < n && attempt < 100 * n; ++attempt) {
    std::vector<double> x(d);
    for (auto& c : x) c = lattice ? lattice_coord(rng) * 0.5 : coord(rng);
    if (seen.insert(x).second) pts.push_back(std::move(x));
  }

  std::vector<double> a(d);
  for (auto& v : a) v = unit(rng);
  const double max_weight = unit(rng);
  const double min_weight = unit(rng) * 0.5;
  const bool floored = unit(rng) < 0.3;
  const double offset = unit(rng) < 0.3 ? -10.0 * unit(rng) : 0.0;
  std::vector<LabeledPoint> raw;
  raw.reserve(pts.size());
  for (auto& x : pts) {
    double score = 0.0;
    for (std::size_t r = 0; r < d; ++r) score += a[r] * x[r];
    score += max_weight * *std::max_element(x.begin(), x.end());
    score += min_weight * *std::min_element(x.begin(), x.end());
    if (floored) score = std::floor(score);
    raw.push_back({Point(std::move(x)), score + offset});
  }
  return validate_dataset(raw);
}

MonotoneDataset random_chain_dataset(std::mt19937_64& rng, std::size_t n, std::size_t d,
                                     bool strict_labels) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, d - 1);
  std::vector<double> x(d);
  for (auto& c : x) c = unit(rng) * 4.0 - 2.0;
  double y = unit(rng) * 2.0 - 1.0;
  std::vector<LabeledPoint> raw;
  raw.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    raw.push_back({Point(x), y});
    // Some coordinates stay put, at least one strictly increases.
    for (auto& c : x)
      if (unit(rng) < 0.5) c += std::round(unit(rng) * 8.0) * 0.125;
    x[pick(rng)] += 0.125 + std::round(unit(rng) * 8.0) * 0.125;
    y += strict_labels ? 0.25 + unit(rng) : (unit(rng) < 0.4 ? 0.0 : unit(rng));
  }
  return validate_dataset(raw);
}

}  // namespace monotone
