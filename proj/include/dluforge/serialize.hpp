#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dluforge/network.hpp"

namespace dluforge {

// Document layout:
//   {"format": "dluforge.network", "version": 1, "input_dim": d,
//    "layers": [{"rows", "cols", "weights" (row-major), "bias",
//                "activation": {"tag", "params"}}, ...]}
// The last entry of "layers" is the affine output layer. Doubles are written
// in shortest round-trip form, so reading a document back is bit-exact.

inline constexpr const char* kNetworkFormat = "dluforge.network";
inline constexpr int kNetworkFormatVersion = 1;

namespace detail {

inline nlohmann::json layer_to_json(const Layer& layer) {
  nlohmann::json j;
  j["rows"] = layer.weights.rows();
  j["cols"] = layer.weights.cols();
  j["weights"] = layer.weights.data();
  j["bias"] = layer.bias;
  nlohmann::json params = nlohmann::json::array();
  if (layer.activation.has_param()) params.push_back(layer.activation.param);
  j["activation"] = {{"tag", std::string(to_string(layer.activation.tag))}, {"params", params}};
  return j;
}

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError("expected an object", path);
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + key + "'", path);
  return *it;
}

inline std::size_t read_size(const nlohmann::json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_number_unsigned()) throw ParseError("expected a non-negative integer", path + "/" + key);
  return v.get<std::size_t>();
}

inline std::vector<double> read_reals(const nlohmann::json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  const std::string here = path + "/" + key;
  if (!v.is_array()) throw ParseError("expected an array of numbers", here);
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ParseError("expected a number", here + "/" + std::to_string(i));
    out.push_back(v[i].get<double>());
  }
  return out;
}

inline Layer layer_from_json(const nlohmann::json& j, const std::string& path) {
  std::size_t rows = read_size(j, "rows", path);
  std::size_t cols = read_size(j, "cols", path);
  auto weights = read_reals(j, "weights", path);
  if (weights.size() != rows * cols) {
    throw ParseError("weights has " + std::to_string(weights.size()) + " entries for a " + std::to_string(rows) +
                         "x" + std::to_string(cols) + " matrix",
                     path + "/weights");
  }
  Layer layer;
  layer.weights = Matrix(rows, cols, std::move(weights));
  layer.bias = read_reals(j, "bias", path);
  if (layer.bias.size() != rows) throw ParseError("bias length does not match rows", path + "/bias");

  const auto& act = require(j, "activation", path);
  const auto& tag = require(act, "tag", path + "/activation");
  if (!tag.is_string()) throw ParseError("activation tag must be a string", path + "/activation/tag");
  try {
    layer.activation.tag = activation_tag_from_string(tag.get<std::string>());
  } catch (const ParameterError& e) {
    throw ParseError(e.what(), path + "/activation/tag");
  }
  auto params = read_reals(act, "params", path + "/activation");
  if (layer.activation.has_param()) {
    if (params.size() != 1) throw ParseError("activation expects one parameter", path + "/activation/params");
    layer.activation.param = params[0];
  } else if (!params.empty()) {
    throw ParseError("activation takes no parameters", path + "/activation/params");
  }
  return layer;
}

}  // namespace detail

inline nlohmann::json to_json(const Network& net) {
  nlohmann::json j;
  j["format"] = kNetworkFormat;
  j["version"] = kNetworkFormatVersion;
  j["input_dim"] = net.input_dim();
  auto layers = nlohmann::json::array();
  for (const auto& layer : net.hidden_layers()) layers.push_back(detail::layer_to_json(layer));
  layers.push_back(detail::layer_to_json(net.output_layer()));
  j["layers"] = std::move(layers);
  return j;
}

inline std::string serialize(const Network& net) { return to_json(net).dump() + "\n"; }

inline Network network_from_json(const nlohmann::json& j) {
  const auto& format = detail::require(j, "format", "");
  if (format != kNetworkFormat) throw ParseError("not a dluforge network document", "/format");
  const auto& version = detail::require(j, "version", "");
  if (version != kNetworkFormatVersion) throw ParseError("unsupported format version", "/version");
  std::size_t input_dim = detail::read_size(j, "input_dim", "");
  const auto& layers = detail::require(j, "layers", "");
  if (!layers.is_array() || layers.empty()) throw ParseError("layers must be a non-empty array", "/layers");

  std::vector<Layer> hidden;
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
    hidden.push_back(detail::layer_from_json(layers[i], "/layers/" + std::to_string(i)));
  }
  const std::string out_path = "/layers/" + std::to_string(layers.size() - 1);
  Layer output = detail::layer_from_json(layers.back(), out_path);
  if (output.activation.tag != ActivationTag::Identity) {
    throw ParseError("output layer must use the Identity activation", out_path + "/activation");
  }
  try {
    return Network(input_dim, std::move(hidden), std::move(output));
  } catch (const ShapeError& e) {
    throw ParseError(e.what(), "/layers");
  }
}

inline Network deserialize(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed JSON", "byte " + std::to_string(e.byte));
  }
  return network_from_json(j);
}

}  // namespace dluforge
