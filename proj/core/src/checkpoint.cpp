#include "mlgw/checkpoint.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "mlgw/errors.hpp"

namespace mlgw::nn {

using nlohmann::json;

void save_parameters(const std::string& path, const ModelParams& params) {
  json doc;
  doc["format"] = "mlgw-parameters";
  doc["format_version"] = kParameterFormatVersion;
  doc["labels"] = params.labels;
  doc["variant"] = to_string(params.variant);
  doc["feature_dim"] = params.feature_dim;
  doc["edge_feature_dim"] = params.edge_feature_dim;
  doc["hidden_dim"] = params.hidden_dim;

  json tensors = json::object();
  params.for_each_tensor([&](const Tensor& t) {
    json entry;
    entry["shape"] = {t.value.rows(), t.value.cols()};
    json values = json::array();
    for (Eigen::Index i = 0; i < t.value.rows(); ++i)
      for (Eigen::Index j = 0; j < t.value.cols(); ++j) values.push_back(t.value(i, j));
    entry["values"] = std::move(values);
    tensors[t.name] = std::move(entry);
  });
  doc["tensors"] = std::move(tensors);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open parameter file for writing: " + path);
  out << doc.dump(1, '\t') << "\n";
  if (!out) throw InputError("failed while writing parameter file: " + path);
}

ModelParams load_parameters(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open parameter file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InputError("malformed parameter file " + path + ": " + e.what());
  }

  try {
    if (doc.at("format").get<std::string>() != "mlgw-parameters") {
      throw InputError("not a parameter file: " + path);
    }
    const int version = doc.at("format_version").get<int>();
    if (version != kParameterFormatVersion) {
      throw InputError("unsupported parameter format version " + std::to_string(version) +
                       " in " + path);
    }

    ModelParams params = ModelParams::init(
        doc.at("labels").get<std::vector<std::string>>(), doc.at("feature_dim").get<int>(),
        doc.at("edge_feature_dim").get<int>(), doc.at("hidden_dim").get<int>(),
        parse_variant(doc.at("variant").get<std::string>()), /*seed=*/0);

    const json& tensors = doc.at("tensors");
    params.for_each_tensor([&](Tensor& t) {
      auto it = tensors.find(t.name);
      if (it == tensors.end()) {
        throw InputError("parameter file " + path + " is missing tensor '" + t.name + "'");
      }
      const auto shape = it->at("shape").get<std::vector<Eigen::Index>>();
      if (shape.size() != 2 || shape[0] != t.value.rows() || shape[1] != t.value.cols()) {
        throw InputError("parameter file " + path + ": tensor '" + t.name +
                         "' has unexpected shape");
      }
      const json& values = it->at("values");
      if (static_cast<Eigen::Index>(values.size()) != t.value.size()) {
        throw InputError("parameter file " + path + ": tensor '" + t.name +
                         "' has wrong value count");
      }
      std::size_t k = 0;
      for (Eigen::Index i = 0; i < t.value.rows(); ++i)
        for (Eigen::Index j = 0; j < t.value.cols(); ++j) t.value(i, j) = values[k++].get<double>();
    });
    return params;
  } catch (const json::exception& e) {
    throw InputError("malformed parameter file " + path + ": " + e.what());
  }
}

}  // namespace mlgw::nn
