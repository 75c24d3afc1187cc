#pragma once

#include <cstddef>
#include <random>
#include <span>

#include "monotone/core.hpp"

namespace monotone {

// Nonnegative weights uniform on [0, 1], biases uniform on [-bias_range,
// bias_range], output weights uniform on [0, 1], output bias uniform on [-1, 1].
ThresholdNetwork random_monotone_network(std::mt19937_64& rng, std::size_t input_dimension,
                                         std::span<const std::size_t> widths,
                                         Activation activation, double bias_range);

// n distinct points; coordinates either on a small integer lattice (many
// comparable pairs) or continuous. Labels come from a random monotone
// scoring function, sometimes floored to create ties, sometimes negative.
MonotoneDataset random_monotone_dataset(std::mt19937_64& rng, std::size_t n, std::size_t d);

// x_1 < x_2 < ... < x_n coordinatewise with y_1 < ... < y_n when
// strict_labels, otherwise labels may repeat.
MonotoneDataset random_chain_dataset(std::mt19937_64& rng, std::size_t n, std::size_t d,
                                     bool strict_labels = true);

}  // namespace monotone
