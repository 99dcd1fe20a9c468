#include "riskgap/stl/predicate_table.hpp"

#include <set>

#include "riskgap/errors.hpp"

namespace riskgap::stl {
namespace {

void require_keys(const std::string& name, const nlohmann::json& j,
                  std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items())
    if (!ok.contains(key)) throw InvalidArgument("predicate '" + name + "': unknown key '" + key + "'");
}

template <typename T>
T field(const std::string& name, const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw InvalidArgument("predicate '" + name + "': missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("predicate '" + name + "': bad '" + key + "': " + e.what());
  }
}

}  // namespace

PredicateAtom predicate_from_json(const std::string& name, const nlohmann::json& j,
                                  const FunctionRegistry& functions) {
  if (!j.is_object()) throw InvalidArgument("predicate '" + name + "' must be an object");
  const auto shape = field<std::string>(name, j, "shape");
  std::vector<std::size_t> indices;
  if (j.contains("indices")) indices = field<std::vector<std::size_t>>(name, j, "indices");

  auto finish = [&](PredicateAtom atom) {
    if (j.value("negated", false)) atom = atom.complement();
    return indices.empty() ? atom : atom.with_indices(std::move(indices));
  };

  if (shape == "halfspace") {
    require_keys(name, j, {"shape", "a", "b", "indices", "negated"});
    return finish(PredicateAtom::halfspace(name, field<std::vector<double>>(name, j, "a"),
                                           field<double>(name, j, "b")));
  }
  if (shape == "axis_box") {
    require_keys(name, j, {"shape", "lo", "hi", "indices", "negated"});
    return finish(PredicateAtom::axis_box(name, field<std::vector<double>>(name, j, "lo"),
                                          field<std::vector<double>>(name, j, "hi")));
  }
  if (shape == "norm_ball") {
    require_keys(name, j, {"shape", "center", "radius", "norm", "indices", "negated"});
    const std::string norm = j.value("norm", std::string("L2"));
    if (norm != "L2" && norm != "Linf")
      throw InvalidArgument("predicate '" + name + "': norm must be L2 or Linf");
    return finish(PredicateAtom::norm_ball(name, field<std::vector<double>>(name, j, "center"),
                                           field<double>(name, j, "radius"),
                                           norm == "L2" ? BallNorm::L2 : BallNorm::Linf));
  }
  if (shape == "functional") {
    require_keys(name, j, {"shape", "function", "threshold", "direction", "indices", "negated"});
    const auto fname = field<std::string>(name, j, "function");
    auto it = functions.find(fname);
    if (it == functions.end())
      throw InvalidArgument("predicate '" + name + "': unknown function '" + fname + "'");
    const std::string dir = j.value("direction", std::string("ge"));
    if (dir != "ge" && dir != "le")
      throw InvalidArgument("predicate '" + name + "': direction must be ge or le");
    return finish(PredicateAtom::functional(name, fname, it->second, j.value("threshold", 0.0),
                                            dir == "ge" ? Direction::GreaterEqual
                                                        : Direction::LessEqual));
  }
  throw InvalidArgument("predicate '" + name + "': unknown shape '" + shape + "'");
}

PredicateTable predicate_table_from_json(const nlohmann::json& j, const FunctionRegistry& functions) {
  if (!j.is_object()) throw InvalidArgument("predicate table must be a JSON object");
  PredicateTable table;
  for (const auto& [name, spec] : j.items()) table.emplace(name, predicate_from_json(name, spec, functions));
  return table;
}

}  // namespace riskgap::stl
