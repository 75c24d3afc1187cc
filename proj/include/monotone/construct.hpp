#pragma once

#include <cstddef>
#include <vector>

#include "monotone/core.hpp"

namespace monotone {

// Record of a construction, in the canonical order of the dataset.
struct ConstructionTrace {
  std::vector<std::size_t> layer_widths;
  // embedding[j][i] == true iff the embedding unit i fires on training point j,
  // read off the built network (not recomputed from the points).
  std::vector<std::vector<bool>> embedding;
  std::vector<double> output_weights;
  double output_bias = 0.0;
  // Chain builder only: the coordinate and threshold used by first-layer unit i.
  std::vector<std::size_t> separating_coordinates;
  std::vector<double> separating_thresholds;
};

template <class Scalar>
struct BasicInterpolant {
  BasicNetwork<Scalar> network;
  ConstructionTrace trace;
};

using Interpolant = BasicInterpolant<double>;
using ExactInterpolant = BasicInterpolant<Rational>;

// Four-layer construction: hidden widths (d*n, n, n).
//   layer 1, unit j: fires iff x[j mod d] >= x_{j / d}[j mod d]   (0-based)
//   layer 2, unit i: AND of its block of d layer-1 units, so it fires iff x >= x_i
//   layer 3, unit i: suffix OR of embedding units i..n-1
//   output: weights y_i - y_{i-1}, so N(x_j) = y_j.
Interpolant build_interpolator(const MonotoneDataset& ds);
ExactInterpolant build_interpolator_exact(const MonotoneDataset& ds);

// Three-layer construction for totally ordered data: hidden widths (n, n).
// Throws NotTotallyOrdered.
Interpolant build_chain_interpolator(const MonotoneDataset& ds);
ExactInterpolant build_chain_interpolator_exact(const MonotoneDataset& ds);

struct SeparatingCoordinate {
  std::size_t coordinate;  // 0-based
  double threshold;
};

// For a chain in canonical order and 0-based i: a coordinate r with
// x_j[r] < x_i[r] for j < i and x_j[r] >= x_i[r] for j >= i. Picks the
// smallest r that strictly increases from x_{i-1}; coordinate 0 for i == 0.
SeparatingCoordinate separating_coordinate(const MonotoneDataset& ds, std::size_t i);

}  // namespace monotone
