#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "riskgap/sim/system.hpp"

namespace riskgap::sim {

enum class Activation { Tanh, Linear };

struct DenseLayer {
  std::vector<std::vector<double>> w;  ///< out × in
  std::vector<double> b;               ///< out
  Activation act = Activation::Tanh;

  std::size_t in_dim() const { return w.empty() ? 0 : w.front().size(); }
  std::size_t out_dim() const { return w.size(); }
};

/// Feed-forward network; dimensions chain and the last layer is linear.
class NNWeights {
 public:
  explicit NNWeights(std::vector<DenseLayer> layers);

  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::size_t input_dim() const { return layers_.front().in_dim(); }
  std::size_t output_dim() const { return layers_.back().out_dim(); }

 private:
  std::vector<DenseLayer> layers_;
};

/// {"layers": [{"w": [[...]], "b": [...], "act": "tanh"|"linear"}]}
NNWeights nn_from_json(const nlohmann::json& j);
nlohmann::json nn_to_json(const NNWeights& w);
NNWeights load_nn(const std::string& path);

/// Sequential affine + activation. Throws DimensionMismatch.
std::vector<double> nn_forward(const NNWeights& w, std::span<const double> input);

/// Random tanh network with the given hidden widths, for tests and demos.
NNWeights random_tanh_network(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out,
                              Rng& rng, double weight_scale = 0.5);

class NNController final : public Controller {
 public:
  NNController(std::string name, NNWeights weights)
      : name_(std::move(name)), weights_(std::move(weights)) {}
  std::string name() const override { return name_; }
  std::size_t input_dim() const override { return weights_.input_dim(); }
  std::size_t output_dim() const override { return weights_.output_dim(); }
  void act(std::span<const double> y, std::span<double> u) const override;

 private:
  std::string name_;
  NNWeights weights_;
};

}  // namespace riskgap::sim
