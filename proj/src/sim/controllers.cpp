#include "riskgap/sim/controllers.hpp"

#include <cmath>
#include <cstdlib>

#include "riskgap/errors.hpp"
#include "riskgap/sim/bicycle.hpp"
#include "riskgap/sim/linear.hpp"
#include "riskgap/sim/uuv.hpp"

namespace riskgap::sim {

void ConstantController::act(std::span<const double> /*y*/, std::span<double> u) const {
  for (std::size_t i = 0; i < value_.size(); ++i) u[i] = value_[i];
}

LinearFeedback::LinearFeedback(std::string name, std::vector<std::vector<double>> k)
    : name_(std::move(name)), k_(std::move(k)) {
  if (k_.empty() || k_.front().empty()) throw InvalidArgument("feedback gain matrix is empty");
  for (const auto& row : k_)
    if (row.size() != k_.front().size()) throw DimensionMismatch(k_.front().size(), row.size());
}

void LinearFeedback::act(std::span<const double> y, std::span<double> u) const {
  for (std::size_t i = 0; i < k_.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) acc -= k_[i][j] * y[j];
    u[i] = acc;
  }
}

void TanhFeedback::act(std::span<const double> y, std::span<double> u) const {
  u[0] = -gain_ * std::tanh(y[0]);
}

namespace {

// "gain:0.4" -> 0.4
std::optional<double> parse_gain(const std::string& id) {
  if (id.rfind("gain:", 0) != 0) return std::nullopt;
  const std::string num = id.substr(5);
  char* end = nullptr;
  const double k = std::strtod(num.c_str(), &end);
  if (num.empty() || *end != '\0' || !std::isfinite(k)) throw InvalidArgument("bad scripted id '" + id + "'");
  return k;
}

}  // namespace

std::vector<std::string> scripted_ids(const SystemModel& model) {
  if (dynamic_cast<const F110Model*>(&model))
    return {"zero", "wall_follow_wide", "wall_follow_mid", "wall_follow_tight"};
  if (dynamic_cast<const UuvModel*>(&model)) return {"zero", "tracker_far", "tracker_mid", "tracker_near"};
  return {"zero", "gain:<k>"};
}

std::unique_ptr<Controller> make_scripted(const std::string& id, const SystemModel& model) {
  if (id == "zero")
    return std::make_unique<ConstantController>(id, model.obs_dim(),
                                                std::vector<double>(model.control_dim(), 0.0));
  if (const auto* f = dynamic_cast<const F110Model*>(&model)) {
    const auto& lidar = f->config().lidar;
    if (id == "wall_follow_wide") return std::make_unique<WallFollowController>(id, lidar, 0.9);
    if (id == "wall_follow_mid") return std::make_unique<WallFollowController>(id, lidar, 0.8);
    if (id == "wall_follow_tight") return std::make_unique<WallFollowController>(id, lidar, 0.7);
  } else if (dynamic_cast<const UuvModel*>(&model)) {
    if (id == "tracker_far") return std::make_unique<PipelineTracker>(id, 30.0);
    if (id == "tracker_mid") return std::make_unique<PipelineTracker>(id, 20.0);
    if (id == "tracker_near") return std::make_unique<PipelineTracker>(id, 12.0);
  } else if (auto k = parse_gain(id)) {
    if (dynamic_cast<const ScalarLipschitzModel*>(&model)) return std::make_unique<TanhFeedback>(id, *k);
    if (model.control_dim() != model.obs_dim())
      throw InvalidArgument("scripted '" + id + "' needs control_dim == obs_dim");
    std::vector<std::vector<double>> gain(model.control_dim(), std::vector<double>(model.obs_dim(), 0.0));
    for (std::size_t i = 0; i < gain.size(); ++i) gain[i][i] = *k;
    return std::make_unique<LinearFeedback>(id, std::move(gain));
  }
  throw InvalidArgument("unknown scripted controller '" + id + "' for system " + model.name());
}

}  // namespace riskgap::sim
