#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "monotone/error.hpp"

namespace monotone {

// Exact arithmetic used for reproducible audits. Every finite double converts
// to a Rational without rounding.
using Rational = boost::multiprecision::mpq_rational;

// A point of R^d with finite coordinates, d >= 1.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  std::size_t dimension() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

// Coordinatewise partial order: a <= b iff a[r] <= b[r] for every r.
bool dominated_by(const Point& a, const Point& b);
inline bool comparable(const Point& a, const Point& b) {
  return dominated_by(a, b) || dominated_by(b, a);
}

struct LabeledPoint {
  Point x;
  double y = 0.0;
};

// A validated monotone data set in canonical order: labels non-decreasing,
// equal-label comparable points smaller first, remaining ties by input index.
class MonotoneDataset {
 public:
  std::size_t size() const noexcept { return samples_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  const Point& point(std::size_t i) const { return samples_[i].x; }
  double label(std::size_t i) const { return samples_[i].y; }
  std::span<const LabeledPoint> samples() const noexcept { return samples_; }
  // Position of sample i in the list handed to validate_dataset.
  std::size_t input_index(std::size_t i) const { return input_index_[i]; }

  friend bool operator==(const MonotoneDataset& a, const MonotoneDataset& b) {
    return a.dimension_ == b.dimension_ && a.samples_.size() == b.samples_.size() &&
           std::equal(a.samples_.begin(), a.samples_.end(), b.samples_.begin(),
                      [](const LabeledPoint& l, const LabeledPoint& r) {
                        return l.x == r.x && l.y == r.y;
                      });
  }

 private:
  friend MonotoneDataset validate_dataset(std::span<const LabeledPoint> raw);

  std::size_t dimension_ = 0;
  std::vector<LabeledPoint> samples_;
  std::vector<std::size_t> input_index_;
};

// Throws EmptyDataset, DimensionMismatch, InvalidNumber, DuplicatePoint or
// MonotoneViolation (with the witness pair as input indices).
MonotoneDataset validate_dataset(std::span<const LabeledPoint> raw);

// True iff every pair of points is coordinatewise comparable.
bool is_totally_ordered(const MonotoneDataset& ds);

// sigma(z) = 1 iff z >= 0. Non-finite input throws InvalidNumber.
int threshold(double z);
inline int threshold(const Rational& z) { return z.sign() >= 0 ? 1 : 0; }

inline bool is_zero(double v) { return v == 0.0; }
inline bool is_zero(const Rational& v) { return v.is_zero(); }

enum class Activation { Threshold, Relu };

std::string_view to_string(Activation a);

// One hidden layer: unit u computes act(<w_u, x> + b_u). Weights are stored
// row-major, one row per unit.
template <class Scalar>
class BasicLayer {
 public:
  BasicLayer(std::size_t inputs, std::size_t units, std::vector<Scalar> weights,
             std::vector<Scalar> biases, Activation activation = Activation::Threshold)
      : inputs_(inputs),
        units_(units),
        weights_(std::move(weights)),
        biases_(std::move(biases)),
        activation_(activation) {
    if (inputs_ == 0 || units_ == 0)
      throw Error(ErrorCode::DimensionMismatch, "layer must have at least one input and unit");
    if (weights_.size() != inputs_ * units_ || biases_.size() != units_)
      throw Error(ErrorCode::DimensionMismatch, "layer weight/bias shape mismatch");
  }

  std::size_t inputs() const noexcept { return inputs_; }
  std::size_t units() const noexcept { return units_; }
  Activation activation() const noexcept { return activation_; }
  const Scalar& weight(std::size_t unit, std::size_t input) const {
    return weights_[unit * inputs_ + input];
  }
  std::span<const Scalar> row(std::size_t unit) const {
    return std::span<const Scalar>(weights_).subspan(unit * inputs_, inputs_);
  }
  std::span<const Scalar> weights() const noexcept { return weights_; }
  std::span<const Scalar> biases() const noexcept { return biases_; }

  bool is_nonnegative() const {
    for (const auto& w : weights_)
      if (w < 0) return false;
    return true;
  }

  // binary_input: every entry of in is 0 or 1 (output of a threshold layer).
  void apply(std::span<const Scalar> in, std::vector<Scalar>& out, bool binary_input = false) const {
    out.assign(units_, Scalar(0));
    for (std::size_t u = 0; u < units_; ++u) {
      const auto w = row(u);
      Scalar acc(0);
      if constexpr (std::is_same_v<Scalar, double>) {
        // zero terms leave a finite sum unchanged
        for (std::size_t k = 0; k < inputs_; ++k) acc += w[k] * in[k];
      } else {
        for (std::size_t k = 0; k < inputs_; ++k) {
          if (is_zero(w[k]) || is_zero(in[k])) continue;
          if (binary_input)
            acc += w[k];
          else
            acc += w[k] * in[k];
        }
      }
      acc += biases_[u];
      if (activation_ == Activation::Threshold)
        out[u] = Scalar(threshold(acc));
      else
        out[u] = acc > 0 ? acc : Scalar(0);
    }
  }

  friend bool operator==(const BasicLayer&, const BasicLayer&) = default;

 private:
  std::size_t inputs_;
  std::size_t units_;
  std::vector<Scalar> weights_;
  std::vector<Scalar> biases_;
  Activation activation_;
};

// N(x) = <w, N_{L-1}(... N_1(x))> + b. With no hidden layers the network is
// the affine map itself.
template <class Scalar>
class BasicNetwork {
 public:
  BasicNetwork(std::size_t input_dimension, std::vector<BasicLayer<Scalar>> layers,
               std::vector<Scalar> output_weights, Scalar output_bias)
      : input_dimension_(input_dimension),
        layers_(std::move(layers)),
        output_weights_(std::move(output_weights)),
        output_bias_(std::move(output_bias)) {
    std::size_t width = input_dimension_;
    if (width == 0) throw Error(ErrorCode::DimensionMismatch, "network input dimension is 0");
    for (const auto& layer : layers_) {
      if (layer.inputs() != width)
        throw Error(ErrorCode::DimensionMismatch, "layer input width does not match previous layer");
      width = layer.units();
    }
    if (output_weights_.size() != width)
      throw Error(ErrorCode::DimensionMismatch, "output weights do not match last hidden width");
    monotone_ = true;
    for (const auto& layer : layers_) monotone_ = monotone_ && layer.is_nonnegative();
    for (const auto& w : output_weights_) monotone_ = monotone_ && !(w < 0);
  }

  std::size_t input_dimension() const noexcept { return input_dimension_; }
  const std::vector<BasicLayer<Scalar>>& layers() const noexcept { return layers_; }
  std::span<const Scalar> output_weights() const noexcept { return output_weights_; }
  const Scalar& output_bias() const noexcept { return output_bias_; }
  // Every hidden and output weight is nonnegative.
  bool is_monotone() const noexcept { return monotone_; }

  std::vector<std::size_t> hidden_widths() const {
    std::vector<std::size_t> widths;
    for (const auto& layer : layers_) widths.push_back(layer.units());
    return widths;
  }
  std::size_t hidden_units() const {
    std::size_t total = 0;
    for (const auto& layer : layers_) total += layer.units();
    return total;
  }

  // All hidden activations, one vector per layer.
  std::vector<std::vector<Scalar>> activations(std::span<const Scalar> x) const {
    check_input(x.size());
    std::vector<std::vector<Scalar>> out;
    out.reserve(layers_.size());
    std::span<const Scalar> in = x;
    bool binary = false;
    for (const auto& layer : layers_) {
      out.emplace_back();
      layer.apply(in, out.back(), binary);
      in = out.back();
      binary = layer.activation() == Activation::Threshold;
    }
    return out;
  }

  Scalar operator()(std::span<const Scalar> x) const {
    check_input(x.size());
    std::vector<Scalar> a(x.begin(), x.end()), b;
    bool binary = false;
    for (const auto& layer : layers_) {
      layer.apply(a, b, binary);
      std::swap(a, b);
      binary = layer.activation() == Activation::Threshold;
    }
    Scalar acc(0);
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (is_zero(output_weights_[k]) || is_zero(a[k])) continue;
      if (binary)
        acc += output_weights_[k];
      else
        acc += output_weights_[k] * a[k];
    }
    return acc + output_bias_;
  }

  friend bool operator==(const BasicNetwork&, const BasicNetwork&) = default;

 private:
  void check_input(std::size_t d) const {
    if (d != input_dimension_)
      throw Error(ErrorCode::DimensionMismatch,
                  "input has dimension " + std::to_string(d) + ", network expects " +
                      std::to_string(input_dimension_));
  }

  std::size_t input_dimension_;
  std::vector<BasicLayer<Scalar>> layers_;
  std::vector<Scalar> output_weights_;
  Scalar output_bias_;
  bool monotone_ = true;
};

using ThresholdLayer = BasicLayer<double>;
using ThresholdNetwork = BasicNetwork<double>;
using ExactLayer = BasicLayer<Rational>;
using ExactNetwork = BasicNetwork<Rational>;

double evaluate(const ThresholdNetwork& net, const Point& x);
Rational evaluate(const ExactNetwork& net, const Point& x);

std::vector<Rational> to_rational(std::span<const double> values);
// Converts every parameter without rounding.
ExactNetwork to_exact(const ThresholdNetwork& net);

}  // namespace monotone
