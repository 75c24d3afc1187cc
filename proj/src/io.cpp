#include "monotone/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

namespace monotone {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_field(std::string_view field, double& out) {
  const std::string text(trim(field));
  if (text.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return errno == 0 && end == text.c_str() + text.size() && std::isfinite(out);
}

bool parse_line(std::string_view line, std::vector<double>& row) {
  row.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    double v = 0.0;
    if (!parse_field(line.substr(start, comma - start), v)) return false;
    row.push_back(v);
    if (comma == std::string_view::npos) return true;
    start = comma + 1;
  }
}

double number_field(const nlohmann::json& v, std::string_view what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    double out = 0.0;
    if (parse_field(v.get_ref<const std::string&>(), out)) return out;
  }
  throw Error(ErrorCode::Schema, "expected a number for " + std::string(what));
}

std::vector<double> number_array(const nlohmann::json& v, std::string_view what) {
  if (!v.is_array()) throw Error(ErrorCode::Schema, std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& item : v) out.push_back(number_field(item, what));
  return out;
}

std::size_t size_field(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number_unsigned())
    throw Error(ErrorCode::Schema, std::string("missing or invalid '") + key + "'");
  return obj[key].get<std::size_t>();
}

nlohmann::json number_list(std::span<const double> values) {
  return nlohmann::json(std::vector<double>(values.begin(), values.end()));
}

}  // namespace

std::vector<std::vector<double>> read_csv_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const bool ok = parse_line(line, row);
    if (!ok) {
      if (first_content) {
        first_content = false;  // header
        continue;
      }
      throw Error(ErrorCode::Schema, "line " + std::to_string(line_no) + ": not a numeric row");
    }
    first_content = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorCode::Schema, "line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(rows.front().size()) + " columns");
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::vector<double>> load_csv_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_csv_rows(in);
}

std::vector<LabeledPoint> rows_to_samples(const std::vector<std::vector<double>>& rows) {
  std::vector<LabeledPoint> samples;
  samples.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() < 2)
      throw Error(ErrorCode::Schema, "dataset rows need at least one coordinate and a label");
    samples.push_back({Point(std::vector<double>(row.begin(), row.end() - 1)), row.back()});
  }
  return samples;
}

std::vector<LabeledPoint> load_dataset_csv(const std::filesystem::path& path) {
  return rows_to_samples(load_csv_rows(path));
}

void write_dataset_csv(std::ostream& out, std::span<const LabeledPoint> samples) {
  for (const auto& s : samples) {
    for (double c : s.x.coords()) out << format_double(c) << ',';
    out << format_double(s.y) << '\n';
  }
}

std::string format_double(double v) { return fmt::format("{}", v); }

nlohmann::json network_to_json(const ThresholdNetwork& net) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : net.layers()) {
    layers.push_back({{"activation", std::string(to_string(layer.activation()))},
                      {"inputs", layer.inputs()},
                      {"units", layer.units()},
                      {"weights", number_list(layer.weights())},
                      {"biases", number_list(layer.biases())}});
  }
  return {{"version", kNetworkFormatVersion},
          {"dimension", net.input_dimension()},
          {"monotone_flag", net.is_monotone()},
          {"layers", layers},
          {"output", {{"weights", number_list(net.output_weights())}, {"bias", net.output_bias()}}}};
}

ThresholdNetwork network_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::Schema, "network document must be an object");
  if (!doc.contains("version") || doc["version"] != kNetworkFormatVersion)
    throw Error(ErrorCode::Schema, "unsupported network format version");
  const std::size_t dimension = size_field(doc, "dimension");
  if (!doc.contains("layers") || !doc["layers"].is_array())
    throw Error(ErrorCode::Schema, "missing 'layers' array");

  std::vector<ThresholdLayer> layers;
  for (const auto& item : doc["layers"]) {
    if (!item.is_object()) throw Error(ErrorCode::Schema, "layer must be an object");
    const std::string act = item.value("activation", "");
    Activation activation;
    if (act == "threshold")
      activation = Activation::Threshold;
    else if (act == "relu")
      activation = Activation::Relu;
    else
      throw Error(ErrorCode::Schema, "unknown activation '" + act + "'");
    if (!item.contains("weights") || !item.contains("biases"))
      throw Error(ErrorCode::Schema, "layer needs 'weights' and 'biases'");
    try {
      layers.emplace_back(size_field(item, "inputs"), size_field(item, "units"),
                          number_array(item["weights"], "weights"),
                          number_array(item["biases"], "biases"), activation);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Schema) throw;
      throw Error(ErrorCode::Schema, e.what());
    }
  }
  if (!doc.contains("output") || !doc["output"].is_object() || !doc["output"].contains("weights") ||
      !doc["output"].contains("bias"))
    throw Error(ErrorCode::Schema, "missing 'output' with 'weights' and 'bias'");
  const auto& output = doc["output"];
  try {
    ThresholdNetwork net(dimension, std::move(layers), number_array(output["weights"], "output weights"),
                         number_field(output["bias"], "output bias"));
    if (doc.contains("monotone_flag") && doc["monotone_flag"] != net.is_monotone())
      throw Error(ErrorCode::Schema, "monotone_flag does not match the weights");
    return net;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Schema) throw;
    throw Error(ErrorCode::Schema, e.what());
  }
}

void save_network(const std::filesystem::path& path, const ThresholdNetwork& net) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << network_to_json(net).dump(1) << '\n';
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

ThresholdNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Schema, std::string("malformed network JSON: ") + e.what());
  }
  return network_from_json(doc);
}

nlohmann::json trace_to_json(const ConstructionTrace& trace) {
  nlohmann::json embedding = nlohmann::json::array();
  for (const auto& row : trace.embedding) {
    std::string bits;
    bits.reserve(row.size());
    for (bool b : row) bits.push_back(b ? '1' : '0');
    embedding.push_back(bits);
  }
  nlohmann::json doc = {{"layer_widths", trace.layer_widths},
                        {"hidden_units", std::accumulate(trace.layer_widths.begin(),
                                                         trace.layer_widths.end(), std::size_t{0})},
                        {"embedding", embedding},
                        {"output_weights", trace.output_weights},
                        {"output_bias", trace.output_bias}};
  if (!trace.separating_coordinates.empty()) {
    doc["separating_coordinates"] = trace.separating_coordinates;
    doc["separating_thresholds"] = trace.separating_thresholds;
  }
  return doc;
}

}  // namespace monotone
