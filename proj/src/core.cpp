#include "monotone/core.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace monotone {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidNumber: return "InvalidNumber";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::MonotoneViolation: return "MonotoneViolation";
    case ErrorCode::NotTotallyOrdered: return "NotTotallyOrdered";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::ActivationMismatch: return "ActivationMismatch";
    case ErrorCode::ArchitectureMismatch: return "ArchitectureMismatch";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Schema: return "Schema";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::string_view to_string(Activation a) {
  return a == Activation::Threshold ? "threshold" : "relu";
}

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw Error(ErrorCode::DimensionMismatch, "point has dimension 0");
  for (double c : coords_)
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidNumber, "point coordinate is not finite");
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

bool dominated_by(const Point& a, const Point& b) {
  const std::size_t d = a.dimension();
  for (std::size_t r = 0; r < d; ++r)
    if (a[r] > b[r]) return false;
  return true;
}

int threshold(double z) {
  if (!std::isfinite(z)) throw Error(ErrorCode::InvalidNumber, "threshold of a non-finite value");
  return z >= 0.0 ? 1 : 0;
}

namespace {

// Linear extension of the dominance order on one block of equal labels.
// Among the currently available points the smallest input index goes first,
// so an already canonical block is returned unchanged.
void order_tie_block(std::span<const LabeledPoint> raw, std::vector<std::size_t>& block) {
  const std::size_t g = block.size();
  if (g < 2) return;
  std::vector<std::vector<std::size_t>> successors(g);
  std::vector<std::size_t> indegree(g, 0);
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = 0; b < g; ++b)
      if (a != b && dominated_by(raw[block[a]].x, raw[block[b]].x)) {
        successors[a].push_back(b);
        ++indegree[b];
      }
  using Entry = std::pair<std::size_t, std::size_t>;  // (input index, block slot)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
  for (std::size_t a = 0; a < g; ++a)
    if (indegree[a] == 0) ready.emplace(block[a], a);
  std::vector<std::size_t> ordered;
  ordered.reserve(g);
  while (!ready.empty()) {
    const auto [idx, slot] = ready.top();
    ready.pop();
    ordered.push_back(idx);
    for (std::size_t s : successors[slot])
      if (--indegree[s] == 0) ready.emplace(block[s], s);
  }
  block = std::move(ordered);
}

}  // namespace

MonotoneDataset validate_dataset(std::span<const LabeledPoint> raw) {
  if (raw.empty()) throw Error(ErrorCode::EmptyDataset, "dataset is empty");
  const std::size_t d = raw.front().x.dimension();
  if (d == 0) throw Error(ErrorCode::DimensionMismatch, "point has dimension 0");
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].x.dimension() != d)
      throw Error(ErrorCode::DimensionMismatch,
                  "point " + std::to_string(i) + " has dimension " +
                      std::to_string(raw[i].x.dimension()) + ", expected " + std::to_string(d));
    if (!std::isfinite(raw[i].y))
      throw Error(ErrorCode::InvalidNumber, "label " + std::to_string(i) + " is not finite");
  }

  for (std::size_t i = 0; i < raw.size(); ++i) {
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      const bool ij = dominated_by(raw[i].x, raw[j].x);
      const bool ji = dominated_by(raw[j].x, raw[i].x);
      if (ij && ji)
        throw Error(ErrorCode::DuplicatePoint,
                    "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide", i, j);
      if (ij && raw[i].y > raw[j].y)
        throw Error(ErrorCode::MonotoneViolation,
                    "x_" + std::to_string(i) + " <= x_" + std::to_string(j) + " but y_" +
                        std::to_string(i) + " > y_" + std::to_string(j),
                    i, j);
      if (ji && raw[j].y > raw[i].y)
        throw Error(ErrorCode::MonotoneViolation,
                    "x_" + std::to_string(j) + " <= x_" + std::to_string(i) + " but y_" +
                        std::to_string(j) + " > y_" + std::to_string(i),
                    j, i);
    }
  }

  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return raw[a].y < raw[b].y; });

  MonotoneDataset ds;
  ds.dimension_ = d;
  ds.samples_.reserve(raw.size());
  ds.input_index_.reserve(raw.size());
  for (std::size_t start = 0; start < order.size();) {
    std::size_t stop = start + 1;
    while (stop < order.size() && raw[order[stop]].y == raw[order[start]].y) ++stop;
    std::vector<std::size_t> block(order.begin() + start, order.begin() + stop);
    order_tie_block(raw, block);
    for (std::size_t idx : block) {
      ds.samples_.push_back(raw[idx]);
      ds.input_index_.push_back(idx);
    }
    start = stop;
  }
  return ds;
}

bool is_totally_ordered(const MonotoneDataset& ds) {
  // A chain in canonical order is sorted by dominance, so checking neighbours
  // suffices; conversely neighbour dominance gives a chain by transitivity.
  for (std::size_t i = 1; i < ds.size(); ++i)
    if (!dominated_by(ds.point(i - 1), ds.point(i))) return false;
  return true;
}

double evaluate(const ThresholdNetwork& net, const Point& x) { return net(x.coords()); }

std::vector<Rational> to_rational(std::span<const double> values) {
  std::vector<Rational> out;
  out.reserve(values.size());
  for (double v : values) out.emplace_back(v);
  return out;
}

Rational evaluate(const ExactNetwork& net, const Point& x) {
  const auto coords = to_rational(x.coords());
  return net(coords);
}

ExactNetwork to_exact(const ThresholdNetwork& net) {
  std::vector<ExactLayer> layers;
  layers.reserve(net.layers().size());
  for (const auto& layer : net.layers())
    layers.emplace_back(layer.inputs(), layer.units(), to_rational(layer.weights()),
                        to_rational(layer.biases()), layer.activation());
  return ExactNetwork(net.input_dimension(), std::move(layers), to_rational(net.output_weights()),
                      Rational(net.output_bias()));
}

}  // namespace monotone
