#pragma once

#include <memory>
#include <string>
#include <vector>

#include "riskgap/sim/system.hpp"

namespace riskgap::sim {

/// u = const, ignores observations.
class ConstantController final : public Controller {
 public:
  ConstantController(std::string name, std::size_t input_dim, std::vector<double> value)
      : name_(std::move(name)), in_(input_dim), value_(std::move(value)) {}
  std::string name() const override { return name_; }
  std::size_t input_dim() const override { return in_; }
  std::size_t output_dim() const override { return value_.size(); }
  void act(std::span<const double> y, std::span<double> u) const override;

 private:
  std::string name_;
  std::size_t in_;
  std::vector<double> value_;
};

/// u = −K y.
class LinearFeedback final : public Controller {
 public:
  LinearFeedback(std::string name, std::vector<std::vector<double>> k);
  std::string name() const override { return name_; }
  std::size_t input_dim() const override { return k_.front().size(); }
  std::size_t output_dim() const override { return k_.size(); }
  void act(std::span<const double> y, std::span<double> u) const override;

 private:
  std::string name_;
  std::vector<std::vector<double>> k_;
};

/// u = −gain·tanh(y), scalar. Lipschitz constant is `gain`.
class TanhFeedback final : public Controller {
 public:
  TanhFeedback(std::string name, double gain) : name_(std::move(name)), gain_(gain) {}
  std::string name() const override { return name_; }
  std::size_t input_dim() const override { return 1; }
  std::size_t output_dim() const override { return 1; }
  void act(std::span<const double> y, std::span<double> u) const override;

 private:
  std::string name_;
  double gain_;
};

/// Scripted baselines by id. Case-study ids:
///   f110: wall_follow_wide, wall_follow_mid, wall_follow_tight (decreasing wall margin)
///   uuv:  tracker_far, tracker_mid, tracker_near
///   any:  zero; linear/scalar also accept gain:<k> (u = −k·y, resp. −k·tanh(y))
/// Throws InvalidArgument for unknown ids.
std::unique_ptr<Controller> make_scripted(const std::string& id, const SystemModel& model);

/// Ids accepted by make_scripted for this model.
std::vector<std::string> scripted_ids(const SystemModel& model);

}  // namespace riskgap::sim
