#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "monotone/construct.hpp"
#include "monotone/core.hpp"

namespace monotone {

inline constexpr int kNetworkFormatVersion = 1;

// Comma-separated numeric rows. A first line that does not parse as numbers
// is taken as a header; blank lines are skipped. Throws Schema on malformed
// rows (with the line number) and on ragged rows.
std::vector<std::vector<double>> read_csv_rows(std::istream& in);
std::vector<std::vector<double>> load_csv_rows(const std::filesystem::path& path);

// Each row: d coordinates then the label.
std::vector<LabeledPoint> rows_to_samples(const std::vector<std::vector<double>>& rows);
std::vector<LabeledPoint> load_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(std::ostream& out, std::span<const LabeledPoint> samples);

// Shortest decimal that reads back to the same double.
std::string format_double(double v);

// {version, dimension, monotone_flag, layers: [{activation, inputs, units,
//  weights (row-major), biases}], output: {weights, bias}}
nlohmann::json network_to_json(const ThresholdNetwork& net);
// Numbers may be JSON numbers or hex-float strings. Throws Schema.
ThresholdNetwork network_from_json(const nlohmann::json& doc);

void save_network(const std::filesystem::path& path, const ThresholdNetwork& net);
ThresholdNetwork load_network(const std::filesystem::path& path);

nlohmann::json trace_to_json(const ConstructionTrace& trace);

}  // namespace monotone
