#include "riskgap/sim/nn.hpp"

#include <cmath>
#include <fstream>

#include "riskgap/errors.hpp"

namespace riskgap::sim {

NNWeights::NNWeights(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw InvalidArgument("network has no layers");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.w.empty() || l.in_dim() == 0) throw InvalidArgument("layer " + std::to_string(i) + " is empty");
    for (const auto& row : l.w)
      if (row.size() != l.in_dim()) throw DimensionMismatch(l.in_dim(), row.size());
    if (l.b.size() != l.out_dim()) throw DimensionMismatch(l.out_dim(), l.b.size());
    if (i > 0 && l.in_dim() != layers_[i - 1].out_dim())
      throw DimensionMismatch(layers_[i - 1].out_dim(), l.in_dim());
  }
  if (layers_.back().act != Activation::Linear) throw InvalidArgument("final layer must be linear");
}

NNWeights nn_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("layers")) throw InvalidArgument("weights file needs 'layers'");
  for (const auto& [k, _] : j.items())
    if (k != "layers") throw InvalidArgument("weights file: unknown key '" + k + "'");
  std::vector<DenseLayer> layers;
  for (const auto& lj : j.at("layers")) {
    for (const auto& [k, _] : lj.items())
      if (k != "w" && k != "b" && k != "act") throw InvalidArgument("layer: unknown key '" + k + "'");
    DenseLayer l;
    try {
      l.w = lj.at("w").get<std::vector<std::vector<double>>>();
      l.b = lj.at("b").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument(std::string("layer: ") + e.what());
    }
    const std::string act = lj.value("act", std::string("tanh"));
    if (act == "tanh") l.act = Activation::Tanh;
    else if (act == "linear") l.act = Activation::Linear;
    else throw InvalidArgument("layer: unknown activation '" + act + "'");
    layers.push_back(std::move(l));
  }
  return NNWeights(std::move(layers));
}

nlohmann::json nn_to_json(const NNWeights& w) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : w.layers())
    layers.push_back({{"w", l.w}, {"b", l.b}, {"act", l.act == Activation::Tanh ? "tanh" : "linear"}});
  return {{"layers", layers}};
}

NNWeights load_nn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open weights file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("weights file '" + path + "': " + e.what());
  }
  return nn_from_json(j);
}

std::vector<double> nn_forward(const NNWeights& w, std::span<const double> input) {
  if (input.size() != w.input_dim()) throw DimensionMismatch(w.input_dim(), input.size());
  std::vector<double> cur(input.begin(), input.end());
  std::vector<double> next;
  for (const auto& l : w.layers()) {
    next.assign(l.out_dim(), 0.0);
    for (std::size_t o = 0; o < l.out_dim(); ++o) {
      double acc = l.b[o];
      const auto& row = l.w[o];
      for (std::size_t i = 0; i < row.size(); ++i) acc += row[i] * cur[i];
      next[o] = l.act == Activation::Tanh ? std::tanh(acc) : acc;
    }
    cur.swap(next);
  }
  return cur;
}

NNWeights random_tanh_network(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out,
                              Rng& rng, double weight_scale) {
  std::vector<DenseLayer> layers;
  std::size_t prev = in;
  auto make = [&](std::size_t n_out, Activation act) {
    DenseLayer l;
    l.act = act;
    l.w.assign(n_out, std::vector<double>(prev));
    l.b.assign(n_out, 0.0);
    for (auto& row : l.w)
      for (double& v : row) v = rng.uniform(-weight_scale, weight_scale);
    for (double& v : l.b) v = rng.uniform(-weight_scale, weight_scale);
    layers.push_back(std::move(l));
    prev = n_out;
  };
  for (std::size_t h : hidden) make(h, Activation::Tanh);
  make(out, Activation::Linear);
  return NNWeights(std::move(layers));
}

void NNController::act(std::span<const double> y, std::span<double> u) const {
  const auto out = nn_forward(weights_, y);
  if (u.size() != out.size()) throw DimensionMismatch(out.size(), u.size());
  std::copy(out.begin(), out.end(), u.begin());
}

}  // namespace riskgap::sim
