#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "sphbm/bodies.hpp"
#include "sphbm/sawtooth.hpp"
#include "sphbm/spherical_function.hpp"

namespace sphbm {

namespace {

using nlohmann::json;

Vec3 read_vec(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 3)
    throw InvalidArgument(std::string("function spec: '") + key + "' must be an array of 3 numbers");
  return {j.at(key)[0].get<double>(), j.at(key)[1].get<double>(), j.at(key)[2].get<double>()};
}

Mat3 read_mat(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 3)
    throw InvalidArgument(std::string("function spec: '") + key + "' must be a 3x3 array");
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    const auto& row = j.at(key)[i];
    if (!row.is_array() || row.size() != 3) throw InvalidArgument("function spec: matrix rows must have 3 entries");
    for (int k = 0; k < 3; ++k) m(i, k) = row[k].get<double>();
  }
  return m;
}

void only_keys(const json& j, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw InvalidArgument("function spec: unknown key '" + k + "'");
  }
}

}  // namespace

SphericalFunction function_from_json(const json& spec) {
  if (spec.is_string()) return parse_function_arg(spec.get<std::string>());
  if (!spec.is_object() || !spec.contains("type")) throw InvalidArgument("function spec: object with 'type' expected");
  const std::string type = spec.at("type").get<std::string>();
  try {
    if (type == "constant") {
      only_keys(spec, {"type", "c"});
      return constant(spec.value("c", 1.0));
    }
    if (type == "linear") {
      only_keys(spec, {"type", "a"});
      return linear(read_vec(spec, "a"));
    }
    if (type == "ellipsoid") {
      only_keys(spec, {"type", "A", "axes"});
      if (spec.contains("axes")) return ellipsoid_axes(read_vec(spec, "axes"));
      return ellipsoid(read_mat(spec, "A"));
    }
    if (type == "quadratic") {
      only_keys(spec, {"type", "c", "M"});
      return quadratic(spec.value("c", 0.0), read_mat(spec, "M"));
    }
    if (type == "zonal") {
      only_keys(spec, {"type", "axis", "coeffs"});
      return zonal(read_vec(spec, "axis"), spec.at("coeffs").get<std::vector<double>>());
    }
    if (type == "abs_coordinate") {
      only_keys(spec, {"type", "index"});
      return abs_coordinate(spec.at("index").get<int>());
    }
    if (type == "exp") {
      only_keys(spec, {"type", "w", "scale"});
      return exp_linear(read_vec(spec, "w"), spec.value("scale", 1.0));
    }
    if (type == "sum") {
      only_keys(spec, {"type", "terms"});
      std::vector<std::pair<double, SphericalFunction>> terms;
      for (const auto& t : spec.at("terms")) {
        only_keys(t, {"weight", "function"});
        terms.emplace_back(t.value("weight", 1.0), function_from_json(t.at("function")));
      }
      return sum(std::move(terms));
    }
    if (type == "rotated") {
      only_keys(spec, {"type", "rho", "function"});
      return rotate_function(function_from_json(spec.at("function")), read_mat(spec, "rho"));
    }
    if (type == "nodal") {
      only_keys(spec, {"type", "nodes", "values", "sigma", "k", "samples", "seed", "source"});
      std::vector<Vec3> nodes;
      for (const auto& n : spec.at("nodes")) nodes.emplace_back(n[0].get<double>(), n[1].get<double>(), n[2].get<double>());
      return nodal(std::move(nodes), spec.at("values").get<std::vector<double>>());
    }
    if (type == "cone_support") {
      only_keys(spec, {"type", "P", "theta"});
      return cone_support(read_vec(spec, "P"), spec.at("theta").get<double>());
    }
    if (type == "sawtooth") {
      only_keys(spec, {"type", "center", "direction", "eps", "r", "smoothing", "amplitude"});
      SawtoothParams p;
      p.center = read_vec(spec, "center");
      p.direction = read_vec(spec, "direction");
      p.eps = spec.at("eps").get<double>();
      p.r = spec.at("r").get<double>();
      p.smoothing = spec.value("smoothing", 0.0);
      p.amplitude = spec.value("amplitude", 1.0);
      return sawtooth_function(p);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("function spec: ") + e.what());
  }
  throw InvalidArgument("function spec: unknown type '" + type + "'");
}

SphericalFunction builtin(const std::string& name) {
  if (name == "constant" || name == "ball") return constant(1.0).with_label(name);
  if (name == "linear") return linear(Vec3(0.3, -0.2, 0.5)).with_label(name);
  if (name == "ellipsoid") return ellipsoid_axes(Vec3(1, 1, 2)).with_label(name);
  if (name == "shifted_ellipsoid")
    return sum({{1.0, ellipsoid_axes(Vec3(1, 2, 3))}, {1.0, linear(Vec3(0.2, 0.1, -0.3))}}).with_label(name);
  if (name == "mild_quadratic") return quadratic(1.0, Vec3(0.1, 0.0, -0.1).asDiagonal().toDenseMatrix()).with_label(name);
  if (name == "zonal_convex") return quadratic(1.0, Vec3(0.0, 0.0, 0.2).asDiagonal().toDenseMatrix()).with_label(name);
  if (name == "quad") return quadratic(1.0, Vec3(0.5, -0.5, 0.0).asDiagonal().toDenseMatrix()).with_label(name);
  if (name == "saddle") return quadratic(0.0, Vec3(0.5, -0.5, 0.0).asDiagonal().toDenseMatrix()).with_label(name);
  if (name == "negative") return constant(-1.0).with_label(name);
  if (name == "zonal_quartic") return zonal(Vec3(0, 0, 1), {1.0, 0.0, 0.0, 0.0, 0.6}).with_label(name);
  if (name == "exp_bump") return sum({{1.0, constant(1.0)}, {0.3, exp_linear(Vec3(0, 0, 2), 1.0)}}).with_label(name);
  if (name == "abs_x") return abs_coordinate(0).with_label(name);
  throw InvalidArgument("unknown builtin function '" + name + "'");
}

std::vector<std::string> builtin_names() {
  return {"constant",      "linear", "ellipsoid", "shifted_ellipsoid", "mild_quadratic", "zonal_convex", "quad",
          "saddle",        "negative", "zonal_quartic", "exp_bump", "abs_x"};
}

SphericalFunction parse_function_arg(const std::string& arg) {
  const std::string prefix = "builtin:";
  if (arg.rfind(prefix, 0) == 0) return builtin(arg.substr(prefix.size()));
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return function_from_json(json::parse(arg));
  if (!std::filesystem::exists(arg)) throw InvalidArgument("function argument '" + arg + "' is neither builtin:<name> nor a file");
  std::ifstream in(arg);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("cannot parse function file '" + arg + "': " + e.what());
  }
  return function_from_json(j);
}

}  // namespace sphbm
