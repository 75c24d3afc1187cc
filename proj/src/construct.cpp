#include "monotone/construct.hpp"

#include <cassert>
#include <string>

namespace monotone {

namespace {

SeparatingCoordinate separating_unchecked(const MonotoneDataset& ds, std::size_t i) {
  if (i == 0) return {0, ds.point(0)[0]};
  const Point& prev = ds.point(i - 1);
  const Point& cur = ds.point(i);
  for (std::size_t r = 0; r < ds.dimension(); ++r)
    if (prev[r] < cur[r]) return {r, cur[r]};
  // Distinct comparable neighbours always differ strictly somewhere.
  assert(false && "chain neighbours without a strictly increasing coordinate");
  throw Error(ErrorCode::NotTotallyOrdered, "no separating coordinate for point " + std::to_string(i));
}

// Output stage shared by both builders. With a nonnegative smallest label the
// dataset is shifted against y_0 = 0; otherwise y_0 := y_1 and the output bias
// carries y_1, so every output weight stays nonnegative.
template <class Scalar>
void label_increments(const MonotoneDataset& ds, std::vector<Scalar>& weights, Scalar& bias) {
  const std::size_t n = ds.size();
  weights.assign(n, Scalar(0));
  const Scalar first(ds.label(0));
  Scalar previous(0);
  bias = Scalar(0);
  if (first < 0) {
    bias = first;
    previous = first;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Scalar current(ds.label(i));
    weights[i] = current - previous;
    previous = current;
  }
}

// Layer weights w_i = sum_{r >= i} e_r, bias -1.
template <class Scalar>
BasicLayer<Scalar> suffix_or_layer(std::size_t n) {
  std::vector<Scalar> w(n * n, Scalar(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = i; r < n; ++r) w[i * n + r] = Scalar(1);
  return BasicLayer<Scalar>(n, n, std::move(w), std::vector<Scalar>(n, Scalar(-1)));
}

template <class Scalar>
std::vector<std::vector<bool>> read_embedding(const BasicNetwork<Scalar>& net,
                                              const MonotoneDataset& ds,
                                              std::size_t embedding_layer) {
  std::vector<std::vector<bool>> rows;
  rows.reserve(ds.size());
  for (std::size_t j = 0; j < ds.size(); ++j) {
    std::vector<Scalar> x;
    x.reserve(ds.dimension());
    for (double c : ds.point(j).coords()) x.emplace_back(c);
    const auto acts = net.activations(x);
    const auto& e = acts[embedding_layer];
    std::vector<bool> row(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) row[i] = (e[i] != 0);
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class Scalar>
ConstructionTrace make_trace(const BasicNetwork<Scalar>& net, const MonotoneDataset& ds,
                             std::size_t embedding_layer) {
  ConstructionTrace trace;
  trace.layer_widths = net.hidden_widths();
  trace.embedding = read_embedding(net, ds, embedding_layer);
  for (const auto& w : net.output_weights()) trace.output_weights.push_back(static_cast<double>(w));
  trace.output_bias = static_cast<double>(net.output_bias());
  return trace;
}

template <class Scalar>
BasicInterpolant<Scalar> build_general(const MonotoneDataset& ds) {
  const std::size_t n = ds.size();
  const std::size_t d = ds.dimension();

  // Unit j tests coordinate j % d against point j / d.
  std::vector<Scalar> w1(d * n * d, Scalar(0));
  std::vector<Scalar> b1(d * n);
  for (std::size_t j = 0; j < d * n; ++j) {
    const std::size_t point = j / d;
    const std::size_t coord = j % d;
    w1[j * d + coord] = Scalar(1);
    b1[j] = -Scalar(ds.point(point)[coord]);
  }

  std::vector<Scalar> w2(n * d * n, Scalar(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < d; ++r) w2[i * (d * n) + d * i + r] = Scalar(1);
  std::vector<Scalar> b2(n, -Scalar(static_cast<double>(d)));

  std::vector<BasicLayer<Scalar>> layers;
  layers.emplace_back(d, d * n, std::move(w1), std::move(b1));
  layers.emplace_back(d * n, n, std::move(w2), std::move(b2));
  layers.push_back(suffix_or_layer<Scalar>(n));

  std::vector<Scalar> out;
  Scalar bias;
  label_increments(ds, out, bias);
  BasicNetwork<Scalar> net(d, std::move(layers), std::move(out), std::move(bias));
  auto trace = make_trace(net, ds, 1);
  return {std::move(net), std::move(trace)};
}

template <class Scalar>
BasicInterpolant<Scalar> build_chain(const MonotoneDataset& ds) {
  if (!is_totally_ordered(ds))
    throw Error(ErrorCode::NotTotallyOrdered, "dataset is not totally ordered");
  const std::size_t n = ds.size();
  const std::size_t d = ds.dimension();

  std::vector<Scalar> w1(n * d, Scalar(0));
  std::vector<Scalar> b1(n);
  std::vector<std::size_t> coords(n);
  std::vector<double> thresholds(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto sep = separating_unchecked(ds, i);
    w1[i * d + sep.coordinate] = Scalar(1);
    b1[i] = -Scalar(sep.threshold);
    coords[i] = sep.coordinate;
    thresholds[i] = sep.threshold;
  }

  std::vector<BasicLayer<Scalar>> layers;
  layers.emplace_back(d, n, std::move(w1), std::move(b1));
  layers.push_back(suffix_or_layer<Scalar>(n));

  std::vector<Scalar> out;
  Scalar bias;
  label_increments(ds, out, bias);
  BasicNetwork<Scalar> net(d, std::move(layers), std::move(out), std::move(bias));
  auto trace = make_trace(net, ds, 0);
  trace.separating_coordinates = std::move(coords);
  trace.separating_thresholds = std::move(thresholds);
  return {std::move(net), std::move(trace)};
}

}  // namespace

Interpolant build_interpolator(const MonotoneDataset& ds) { return build_general<double>(ds); }

ExactInterpolant build_interpolator_exact(const MonotoneDataset& ds) {
  return build_general<Rational>(ds);
}

Interpolant build_chain_interpolator(const MonotoneDataset& ds) { return build_chain<double>(ds); }

ExactInterpolant build_chain_interpolator_exact(const MonotoneDataset& ds) {
  return build_chain<Rational>(ds);
}

SeparatingCoordinate separating_coordinate(const MonotoneDataset& ds, std::size_t i) {
  if (i >= ds.size())
    throw Error(ErrorCode::InvalidArgument, "point index " + std::to_string(i) + " out of range");
  if (!is_totally_ordered(ds))
    throw Error(ErrorCode::NotTotallyOrdered, "dataset is not totally ordered");
  return separating_unchecked(ds, i);
}

}  // namespace monotone
