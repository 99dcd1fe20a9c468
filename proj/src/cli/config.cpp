#include "riskgap/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <string_view>

#include "riskgap/errors.hpp"
#include "riskgap/sim/bicycle.hpp"
#include "riskgap/sim/controllers.hpp"
#include "riskgap/sim/linear.hpp"
#include "riskgap/sim/nn.hpp"
#include "riskgap/sim/uuv.hpp"
#include "riskgap/stl/parser.hpp"

namespace riskgap::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& where, std::string_view key) {
  return where.empty() ? std::string(key) : where + "." + std::string(key);
}

void check_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void check_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  check_object(j, where.empty() ? "config" : where);
  for (const auto& [k, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError(join(where, k) + ": unknown key");
  }
}

template <class T>
T get(const json& j, std::string_view key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(join(where, key) + ": required");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(join(where, key) + ": wrong type");
  }
}

template <class T>
T get_or(const json& j, std::string_view key, T fallback, const std::string& where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

double get_positive(const json& j, std::string_view key, double fallback, const std::string& where) {
  const double v = get_or(j, key, fallback, where);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(join(where, key) + ": must be > 0");
  return v;
}

json read_json(const std::filesystem::path& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(what + ": cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(what + ": " + path.string() + ": " + e.what());
  }
}

std::filesystem::path resolve(const ExperimentConfig& cfg, const std::filesystem::path& p) {
  return p.is_absolute() || cfg.base_dir.empty() ? p : cfg.base_dir / p;
}

std::string kind_of(const json& pert, const std::string& where) {
  if (pert.is_null()) return "none";
  check_object(pert, where);
  return get<std::string>(pert, "kind", where);
}

sim::F110Config f110_config(const ExperimentConfig& cfg, const json& pert, const std::string& where) {
  const json& o = cfg.system_options;
  const std::string w = "system_options";
  check_keys(o, w,
             {"hallway", "map", "wheelbase", "max_steering", "speed", "speed_time_constant", "rays", "fov",
              "max_range", "noise_halfwidth", "dt", "command_scale", "x0_lo", "x0_hi", "y0_halfwidth",
              "theta0_halfwidth", "heading_noise"});
  sim::F110Config c;
  if (o.contains("hallway")) {
    const json& h = o.at("hallway");
    check_keys(h, w + ".hallway", {"first_leg", "width", "exit_leg"});
    c.hallway.first_leg = get_positive(h, "first_leg", c.hallway.first_leg, w + ".hallway");
    c.hallway.width = get_positive(h, "width", c.hallway.width, w + ".hallway");
    c.hallway.exit_leg = get_positive(h, "exit_leg", c.hallway.exit_leg, w + ".hallway");
  }
  c.bicycle.wheelbase = get_positive(o, "wheelbase", c.bicycle.wheelbase, w);
  c.bicycle.max_steering = get_positive(o, "max_steering", c.bicycle.max_steering, w);
  c.bicycle.speed_command = get_or(o, "speed", c.bicycle.speed_command, w);
  c.bicycle.speed_time_constant = get_or(o, "speed_time_constant", c.bicycle.speed_time_constant, w);
  c.lidar.rays = get_or<std::size_t>(o, "rays", c.lidar.rays, w);
  c.lidar.fov = get_positive(o, "fov", c.lidar.fov, w);
  c.lidar.max_range = get_positive(o, "max_range", c.lidar.max_range, w);
  c.lidar.noise_halfwidth = get_or(o, "noise_halfwidth", c.lidar.noise_halfwidth, w);
  c.dt = get_positive(o, "dt", c.dt, w);
  c.command_scale = get_positive(o, "command_scale", c.command_scale, w);
  c.x0_lo = get_or(o, "x0_lo", c.x0_lo, w);
  c.x0_hi = get_or(o, "x0_hi", c.x0_hi, w);
  c.y0_halfwidth = get_or(o, "y0_halfwidth", c.y0_halfwidth, w);
  c.theta0_halfwidth = get_or(o, "theta0_halfwidth", c.theta0_halfwidth, w);
  c.heading_noise = get_or(o, "heading_noise", c.heading_noise, w);

  const std::string kind = kind_of(pert, where);
  auto& p = c.perturbation;
  if (kind == "none") {
    if (!pert.is_null()) check_keys(pert, where, {"kind"});
  } else if (kind == "dropped_rays") {
    check_keys(pert, where, {"kind", "count"});
    p.kind = sim::LidarPerturbation::Kind::DroppedRays;
    p.dropped_count = get_or<std::size_t>(pert, "count", p.dropped_count, where);
  } else if (kind == "structured") {
    check_keys(pert, where, {"kind", "bias_amplitude", "heteroscedastic_gain", "drop_probability"});
    p.kind = sim::LidarPerturbation::Kind::Structured;
    p.bias_amplitude = get_or(pert, "bias_amplitude", 0.05, where);
    p.heteroscedastic_gain = get_or(pert, "heteroscedastic_gain", 0.1, where);
    p.drop_probability = get_or(pert, "drop_probability", 0.05, where);
  } else if (kind == "observation_offset") {
    check_keys(pert, where, {"kind", "offset"});
    p.kind = sim::LidarPerturbation::Kind::ObservationOffset;
    p.offset = get<double>(pert, "offset", where);
  } else if (kind == "process_noise_scale") {
    check_keys(pert, where, {"kind", "scale"});
    c.process_noise_scale = get<double>(pert, "scale", where);
  } else {
    throw ConfigError(where + ".kind: '" + kind + "' is not a perturbation of the f110 system");
  }
  return c;
}

sim::UuvConfig uuv_config(const ExperimentConfig& cfg, const json& pert, const std::string& where) {
  const json& o = cfg.system_options;
  const std::string w = "system_options";
  check_keys(o, w,
             {"tau_heading", "tau_speed", "tau_depth", "dt", "sigma_d", "sigma_theta", "y0_lo", "y0_hi",
              "theta0_halfwidth", "speed0", "depth0"});
  sim::UuvConfig c;
  c.params.tau_heading = get_positive(o, "tau_heading", c.params.tau_heading, w);
  c.params.tau_speed = get_positive(o, "tau_speed", c.params.tau_speed, w);
  c.params.tau_depth = get_positive(o, "tau_depth", c.params.tau_depth, w);
  c.dt = get_positive(o, "dt", c.dt, w);
  c.sigma_d = get_or(o, "sigma_d", c.sigma_d, w);
  c.sigma_theta = get_or(o, "sigma_theta", c.sigma_theta, w);
  c.y0_lo = get_or(o, "y0_lo", c.y0_lo, w);
  c.y0_hi = get_or(o, "y0_hi", c.y0_hi, w);
  c.theta0_halfwidth = get_or(o, "theta0_halfwidth", c.theta0_halfwidth, w);
  c.speed0 = get_or(o, "speed0", c.speed0, w);
  c.depth0 = get_or(o, "depth0", c.depth0, w);

  const std::string kind = kind_of(pert, where);
  auto& p = c.perturbation;
  if (kind == "none") {
    if (!pert.is_null()) check_keys(pert, where, {"kind"});
  } else if (kind == "lag_error") {
    check_keys(pert, where, {"kind", "lag_gain", "position_sigma"});
    p.kind = sim::UuvPerturbation::Kind::LagError;
    p.lag_gain = get_or(pert, "lag_gain", p.lag_gain, where);
    p.position_sigma = get_or(pert, "position_sigma", p.position_sigma, where);
  } else if (kind == "observation_offset") {
    check_keys(pert, where, {"kind", "offset"});
    p.kind = sim::UuvPerturbation::Kind::ObservationOffset;
    p.offset = get<double>(pert, "offset", where);
  } else if (kind == "process_noise_scale") {
    check_keys(pert, where, {"kind", "scale"});
    c.process_noise_scale = get<double>(pert, "scale", where);
  } else {
    throw ConfigError(where + ".kind: '" + kind + "' is not a perturbation of the uuv system");
  }
  return c;
}

sim::ScalarLipschitzConfig scalar_config(const ExperimentConfig& cfg, const json& pert, const std::string& where) {
  const json& o = cfg.system_options;
  const std::string w = "system_options";
  check_keys(o, w, {"a", "b", "c", "g1", "g2", "v_max", "w_max", "x0_halfwidth"});
  sim::ScalarLipschitzConfig c;
  c.a = get_or(o, "a", c.a, w);
  c.b = get_or(o, "b", c.b, w);
  c.c = get_or(o, "c", c.c, w);
  c.g1 = get_or(o, "g1", c.g1, w);
  c.g2 = get_or(o, "g2", c.g2, w);
  c.v_max = get_or(o, "v_max", c.v_max, w);
  c.w_max = get_or(o, "w_max", c.w_max, w);
  c.x0_halfwidth = get_or(o, "x0_halfwidth", c.x0_halfwidth, w);
  if (c.v_max < 0.0 || c.w_max < 0.0) throw ConfigError(w + ": v_max and w_max must be >= 0");

  const std::string kind = kind_of(pert, where);
  if (kind == "none") {
    if (!pert.is_null()) check_keys(pert, where, {"kind"});
  } else if (kind == "noise_map") {
    check_keys(pert, where, {"kind", "scale", "shift"});
    c.perturbed = true;
    c.scale = get_or(pert, "scale", 1.0, where);
    c.shift = get_or(pert, "shift", 0.0, where);
  } else {
    throw ConfigError(where + ".kind: '" + kind + "' is not a perturbation of the scalar system");
  }
  return c;
}

sim::DisturbanceShift shift_config(const json& j, const std::string& where) {
  check_keys(j, where, {"scale", "shift"});
  sim::DisturbanceShift s;
  s.scale = get_or(j, "scale", 1.0, where);
  s.shift = get_or(j, "shift", std::vector<double>{}, where);
  return s;
}

sim::LinearConfig linear_config(const ExperimentConfig& cfg, const json& pert, const std::string& where) {
  check_keys(cfg.system_options, "system_options", {});
  sim::LinearConfig c;
  try {
    c = sim::linear_config_from_json(cfg.custom_model_json);
  } catch (const InvalidArgument& e) {
    throw ConfigError(cfg.custom_model.string() + ": " + e.what());
  }
  const std::string kind = kind_of(pert, where);
  if (kind == "none") {
    if (!pert.is_null()) check_keys(pert, where, {"kind"});
  } else if (kind == "disturbance_shift") {
    check_keys(pert, where, {"kind", "process", "measurement"});
    c.perturbed = true;
    if (pert.contains("process")) c.process_shift = shift_config(pert.at("process"), where + ".process");
    if (pert.contains("measurement"))
      c.measurement_shift = shift_config(pert.at("measurement"), where + ".measurement");
  } else if (kind == "observation_offset") {
    check_keys(pert, where, {"kind", "offset"});
    c.perturbed = true;
    c.observation_offset = get<std::vector<double>>(pert, "offset", where);
  } else {
    throw ConfigError(where + ".kind: '" + kind + "' is not a perturbation of a custom linear system");
  }
  return c;
}

gap::IissGain gain_config(const json& g, const std::string& where) {
  check_keys(g, where, {"linear", "matrix", "table"});
  if (g.size() != 1) throw ConfigError(where + ": give exactly one of linear, matrix, table");
  try {
    if (g.contains("linear")) return gap::IissGain::linear(get<double>(g, "linear", where));
    if (g.contains("matrix"))
      return gap::linear_iiss_gain(get<std::vector<std::vector<double>>>(g, "matrix", where));
    return gap::IissGain::tabulated(get<std::vector<std::pair<double, double>>>(g, "table", where));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

GapSection gap_config(const json& g, const ExperimentConfig& cfg) {
  const std::string w = "gap";
  check_keys(g, w,
             {"method", "nominal", "perturbed", "lipschitz", "disturbance", "gain", "diameter", "delta",
              "gamma_support_bound", "gamma_weights", "compare"});
  GapSection s;
  const auto method = get<std::string>(g, "method", w);
  if (method == "lipschitz") s.method = GapMethod::Lipschitz;
  else if (method == "iiss") s.method = GapMethod::Iiss;
  else if (method == "assumed") s.method = GapMethod::Assumed;
  else if (method == "stochastic") s.method = GapMethod::Stochastic;
  else throw ConfigError("gap.method: expected lipschitz, iiss, assumed or stochastic");
  s.nominal = get_or<std::string>(g, "nominal", cfg.variants.front().name, w);
  s.perturbed = get_or<std::string>(g, "perturbed", cfg.variants.size() > 1 ? cfg.variants[1].name : "", w);
  find_variant(cfg, s.nominal);
  find_variant(cfg, s.perturbed);

  if (s.method == GapMethod::Lipschitz) {
    const json& l = g.contains("lipschitz") ? g.at("lipschitz") : throw ConfigError("gap.lipschitz: required");
    check_keys(l, w + ".lipschitz", {"l_f1", "l_f2", "l_f3", "l_u", "l_g1", "l_g2"});
    for (const char* k : {"l_f1", "l_f2", "l_f3", "l_u", "l_g1", "l_g2"}) get<double>(l, k, w + ".lipschitz");
    s.lipschitz = {l.at("l_f1"), l.at("l_f2"), l.at("l_f3"), l.at("l_u"), l.at("l_g1"), l.at("l_g2")};
    const json& d = g.contains("disturbance") ? g.at("disturbance") : throw ConfigError("gap.disturbance: required");
    check_keys(d, w + ".disturbance", {"v_star", "w_star", "max_v", "max_w"});
    if (d.contains("max_v") || d.contains("max_w"))
      s.disturbance = gap::DisturbanceBounds::from_max_norms(get_or(d, "max_v", 0.0, w + ".disturbance"),
                                                             get_or(d, "max_w", 0.0, w + ".disturbance"));
    else
      s.disturbance = {get_or(d, "v_star", 0.0, w + ".disturbance"), get_or(d, "w_star", 0.0, w + ".disturbance")};
    try {
      s.lipschitz.validate();
      s.disturbance.validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("gap: ") + e.what());
    }
  } else if (s.method == GapMethod::Iiss) {
    if (!g.contains("gain")) throw ConfigError("gap.gain: required for method iiss");
    s.gain = gain_config(g.at("gain"), w + ".gain");
    s.diameter = get<double>(g, "diameter", w);
    if (!(s.diameter >= 0.0)) throw ConfigError("gap.diameter: must be >= 0");
  } else if (s.method == GapMethod::Assumed) {
    s.delta = get<double>(g, "delta", w);
    if (!(s.delta >= 0.0)) throw ConfigError("gap.delta: must be >= 0");
  }
  if (g.contains("gamma_support_bound")) s.gamma_support_bound = get<double>(g, "gamma_support_bound", w);
  s.gamma_weights = get_or(g, "gamma_weights", std::vector<double>{}, w);
  s.compare = get_or(g, "compare", false, w);
  if (s.compare && s.method == GapMethod::Stochastic)
    throw ConfigError("gap.compare: controller comparison needs a constant or Lipschitz Δ");
  return s;
}

}  // namespace

std::string to_string(GapMethod m) {
  switch (m) {
    case GapMethod::Lipschitz: return "lipschitz";
    case GapMethod::Iiss: return "iiss";
    case GapMethod::Assumed: return "assumed";
    case GapMethod::Stochastic: return "stochastic";
  }
  return "?";
}

const ModelVariant& find_variant(const ExperimentConfig& cfg, const std::string& name) {
  for (const auto& v : cfg.variants)
    if (v.name == name) return v;
  throw ConfigError("no variant named '" + name + "'");
}

std::unique_ptr<sim::SystemModel> build_model(const ExperimentConfig& cfg, const ModelVariant& v) {
  const std::string where = "variants." + v.name + ".perturbation";
  try {
    switch (cfg.system) {
      case SystemKind::F110: {
        auto c = f110_config(cfg, v.perturbation, where);
        std::optional<sim::WallMap> map;
        if (cfg.system_options.contains("map")) {
          const auto path = resolve(cfg, get<std::string>(cfg.system_options, "map", "system_options"));
          std::ifstream in(path);
          if (!in) throw ConfigError("system_options.map: cannot open " + path.string());
          map = sim::read_map_csv(in);
        }
        return std::make_unique<sim::F110Model>(c, std::move(map));
      }
      case SystemKind::Uuv: return std::make_unique<sim::UuvModel>(uuv_config(cfg, v.perturbation, where));
      case SystemKind::Scalar:
        return std::make_unique<sim::ScalarLipschitzModel>(scalar_config(cfg, v.perturbation, where));
      case SystemKind::Custom: return std::make_unique<sim::LinearModel>(linear_config(cfg, v.perturbation, where));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError("system: unsupported");
}

std::unique_ptr<sim::Controller> build_controller(const ExperimentConfig& cfg, const ControllerEntry& c,
                                                  const sim::SystemModel& model) {
  const std::string where = "controllers." + c.name;
  std::unique_ptr<sim::Controller> out;
  try {
    if (!c.scripted.empty()) {
      auto base = sim::make_scripted(c.scripted, model);
      out = std::move(base);
    } else {
      out = std::make_unique<sim::NNController>(c.name, sim::load_nn(resolve(cfg, c.weights_path).string()));
    }
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  if (out->input_dim() != model.obs_dim() || out->output_dim() != model.control_dim())
    throw ConfigError(where + ": controller maps " + std::to_string(out->input_dim()) + " -> " +
                      std::to_string(out->output_dim()) + ", system needs " + std::to_string(model.obs_dim()) +
                      " -> " + std::to_string(model.control_dim()));
  return out;
}

stl::FunctionRegistry function_registry(const ExperimentConfig& cfg) {
  stl::FunctionRegistry r;
  std::size_t n = 0;
  if (cfg.system == SystemKind::F110) {
    const auto model = build_model(cfg, cfg.variants.front());
    const auto& f = dynamic_cast<const sim::F110Model&>(*model);
    auto map = std::make_shared<const sim::WallMap>(f.map());
    r["wall_distance"] = [map](std::span<const double> x) { return map->signed_distance({x[0], x[1]}); };
    n = 4;
  } else if (cfg.system == SystemKind::Uuv) {
    r["pipeline_distance"] = [](std::span<const double> x) { return std::abs(x[1]); };
    r["depth"] = [](std::span<const double> x) { return x[4]; };
    n = 5;
  } else {
    n = build_model(cfg, cfg.variants.front())->state_dim();
  }
  for (std::size_t i = 0; i < n; ++i)
    r["state_" + std::to_string(i)] = [i](std::span<const double> x) { return x[i]; };
  return r;
}

sim::RobustnessSpec build_spec(const ExperimentConfig& cfg) {
  stl::PredicateTable table;
  try {
    table = stl::predicate_table_from_json(cfg.predicates, function_registry(cfg));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("predicates: ") + e.what());
  }
  if (!cfg.formula.empty()) {
    try {
      return {stl::parse_formula(cfg.formula, table), cfg.semantics};
    } catch (const Error& e) {
      throw ConfigError(std::string("spec.formula: ") + e.what());
    }
  }
  const auto it = table.find(cfg.constraint);
  if (it == table.end()) throw ConfigError("spec.constraint: unknown predicate '" + cfg.constraint + "'");
  return {stl::ConstraintSpec{it->second, cfg.constraint_horizon}, cfg.semantics};
}

ExperimentConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  check_keys(j, "",
             {"system", "system_options", "variants", "controllers", "spec", "predicates", "semantics", "trials",
              "horizon", "master_seed", "risk", "betas", "gap", "histogram_bins", "output_dir"});
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;

  if (!j.contains("system")) throw ConfigError("system: required");
  const json& sys = j.at("system");
  if (sys.is_string()) {
    const auto s = sys.get<std::string>();
    if (s == "f110") cfg.system = SystemKind::F110;
    else if (s == "uuv") cfg.system = SystemKind::Uuv;
    else if (s == "scalar") cfg.system = SystemKind::Scalar;
    else throw ConfigError("system: expected f110, uuv, scalar or {\"custom\": path}");
  } else {
    check_keys(sys, "system", {"custom"});
    cfg.system = SystemKind::Custom;
    cfg.custom_model = get<std::string>(sys, "custom", "system");
    cfg.custom_model_json = read_json(resolve(cfg, cfg.custom_model), "system.custom");
  }
  if (j.contains("system_options")) {
    cfg.system_options = j.at("system_options");
    check_object(cfg.system_options, "system_options");
  }

  if (j.contains("variants")) {
    const json& vs = j.at("variants");
    if (!vs.is_array() || vs.empty()) throw ConfigError("variants: expected a nonempty array");
    std::set<std::string> seen;
    for (const auto& v : vs) {
      check_keys(v, "variants[]", {"name", "perturbation"});
      ModelVariant mv{get<std::string>(v, "name", "variants[]"), v.value("perturbation", json())};
      if (!seen.insert(mv.name).second) throw ConfigError("variants: duplicate name '" + mv.name + "'");
      cfg.variants.push_back(std::move(mv));
    }
  } else {
    cfg.variants.push_back({"nominal", json()});
  }

  if (!j.contains("controllers") || !j.at("controllers").is_array() || j.at("controllers").empty())
    throw ConfigError("controllers: at least one controller is required");
  {
    std::set<std::string> seen;
    for (const auto& c : j.at("controllers")) {
      check_keys(c, "controllers[]", {"name", "scripted", "weights"});
      ControllerEntry e;
      e.scripted = get_or<std::string>(c, "scripted", "", "controllers[]");
      e.weights_path = get_or<std::string>(c, "weights", "", "controllers[]");
      e.name = get_or<std::string>(c, "name", e.scripted, "controllers[]");
      if (e.scripted.empty() == e.weights_path.empty())
        throw ConfigError("controllers." + e.name + ": give exactly one of scripted, weights");
      if (e.name.empty()) throw ConfigError("controllers[]: name required");
      if (!seen.insert(e.name).second) throw ConfigError("controllers: duplicate name '" + e.name + "'");
      cfg.controllers.push_back(std::move(e));
    }
  }

  if (!j.contains("spec")) throw ConfigError("spec: required");
  {
    const json& s = j.at("spec");
    check_keys(s, "spec", {"formula", "constraint", "horizon"});
    cfg.formula = get_or<std::string>(s, "formula", "", "spec");
    cfg.constraint = get_or<std::string>(s, "constraint", "", "spec");
    if (cfg.formula.empty() == cfg.constraint.empty())
      throw ConfigError("spec: give exactly one of formula, constraint");
    if (s.contains("horizon")) {
      if (cfg.constraint.empty()) throw ConfigError("spec.horizon: only for constraint specs");
      const auto h = get<std::vector<std::size_t>>(s, "horizon", "spec");
      if (h.size() != 2 || h[0] > h[1]) throw ConfigError("spec.horizon: expected [first, last]");
      cfg.constraint_horizon = std::make_pair(h[0], h[1]);
    }
  }
  if (j.contains("predicates")) cfg.predicates = j.at("predicates");

  if (j.contains("semantics")) {
    const json& s = j.at("semantics");
    check_keys(s, "semantics", {"until_inner"});
    const auto ui = get_or<std::string>(s, "until_inner", "open", "semantics");
    if (ui == "open") cfg.semantics.until_inner = stl::UntilInner::Open;
    else if (ui == "closed") cfg.semantics.until_inner = stl::UntilInner::Closed;
    else throw ConfigError("semantics.until_inner: expected open or closed");
  }

  cfg.trials = get_or<std::size_t>(j, "trials", cfg.trials, "");
  cfg.horizon = get_or<std::size_t>(j, "horizon", cfg.horizon, "");
  cfg.master_seed = get_or<std::uint64_t>(j, "master_seed", cfg.master_seed, "");
  if (cfg.trials < 1) throw ConfigError("trials: must be >= 1");
  if (cfg.horizon < 1) throw ConfigError("horizon: must be >= 1");
  if (cfg.constraint_horizon && cfg.constraint_horizon->second > cfg.horizon)
    throw ConfigError("spec.horizon: last step exceeds the trial horizon");

  if (!j.contains("risk") || !j.at("risk").is_array() || j.at("risk").empty())
    throw ConfigError("risk: at least one risk entry is required");
  for (const auto& r : j.at("risk")) {
    check_keys(r, "risk[]", {"metric", "beta", "delta", "support_bound", "upper_bound"});
    RiskEntry e;
    try {
      e.metric = risk::metric_from_string(get<std::string>(r, "metric", "risk[]"));
    } catch (const InvalidArgument& ex) {
      throw ConfigError(std::string("risk[].metric: ") + ex.what());
    }
    e.query.beta = get_or(r, "beta", e.query.beta, "risk[]");
    e.query.delta = get_or(r, "delta", e.query.delta, "risk[]");
    if (r.contains("support_bound")) e.support_bound = get<double>(r, "support_bound", "risk[]");
    e.upper_bound = get_or(r, "upper_bound", e.metric == risk::Metric::VaR || e.metric == risk::Metric::CVaR, "risk[]");
    try {
      e.query.validate();
    } catch (const Error& ex) {
      throw ConfigError(std::string("risk[]: ") + ex.what());
    }
    if (e.metric == risk::Metric::CVaR && e.upper_bound && !e.support_bound)
      throw ConfigError("risk[].support_bound: required for a CVaR upper bound");
    if (e.upper_bound && e.metric != risk::Metric::VaR && e.metric != risk::Metric::CVaR)
      throw ConfigError("risk[].upper_bound: only VaR and CVaR have upper bounds");
    cfg.risk.push_back(e);
  }

  cfg.betas = get_or(j, "betas", std::vector<double>{}, "");
  if (j.contains("betas") && cfg.betas.empty()) throw ConfigError("betas: empty list");
  for (double b : cfg.betas)
    if (!(b > 0.0 && b < 1.0)) throw ConfigError("betas: every beta must lie in (0, 1)");

  cfg.histogram_bins = get_or<std::size_t>(j, "histogram_bins", cfg.histogram_bins, "");
  if (cfg.histogram_bins < 1) throw ConfigError("histogram_bins: must be >= 1");
  cfg.output_dir = get_or<std::string>(j, "output_dir", cfg.output_dir.string(), "");

  // Build everything once so bad options fail here, not halfway through a run.
  for (const auto& v : cfg.variants) {
    const auto model = build_model(cfg, v);
    for (const auto& c : cfg.controllers) build_controller(cfg, c, *model);
  }
  const auto spec = build_spec(cfg);
  if (const auto* f = std::get_if<stl::Formula>(&spec.spec); f && stl::horizon_length(*f) > cfg.horizon)
    throw ConfigError("spec.formula: needs " + std::to_string(stl::horizon_length(*f)) +
                      " steps but the trial horizon is " + std::to_string(cfg.horizon));
  if (j.contains("gap")) cfg.gap = gap_config(j.at("gap"), cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_json(path, "config"), path.parent_path());
}

}  // namespace riskgap::cli
