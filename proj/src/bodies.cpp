#include "sphbm/bodies.hpp"

#include <map>

#include <cmath>

#include "sphbm/kernels.hpp"
#include "sphbm/random.hpp"

namespace sphbm {

namespace {

nlohmann::json vec_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

Vec3 read_vec(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw InvalidArgument("body spec: expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Vec3 unit_or_throw(const Vec3& v, const char* what) {
  if (!is_unit(v, 1e-9)) throw InvalidArgument(std::string(what) + " must be a unit vector");
  return v.normalized();
}

SphericalFunction ball_support(double r, const Vec3& c) {
  if (c.isZero(0.0)) return constant(r);
  return sum({{1.0, constant(r)}, {1.0, linear(c)}});
}

SphericalFunction cylinder_support(const CylinderBody& z) {
  const TangentFrame fr = tangent_basis(z.axis);
  return SphericalFunction(
      [base = z.base, lambda = z.lambda, fr](const Vec3& u) {
        return base.homogeneous(u.dot(fr.e1), u.dot(fr.e2)) + lambda * std::max(0.0, u.dot(fr.base));
      },
      Smoothness::C0, "cylinder", nullptr);
}

SphericalFunction compute_support(const ConvexBody::Variant& v) {
  return std::visit(
      [](const auto& b) -> SphericalFunction {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, SmoothBody>) {
          return b.h;
        } else if constexpr (std::is_same_v<T, BallBody>) {
          return ball_support(b.r, b.center);
        } else if constexpr (std::is_same_v<T, ConeBody>) {
          return b.scale == 1.0 ? cone_support(b.P, b.theta) : sum({{b.scale, cone_support(b.P, b.theta)}});
        } else if constexpr (std::is_same_v<T, CylinderBody>) {
          return cylinder_support(b);
        } else {
          std::vector<std::pair<double, SphericalFunction>> terms;
          for (std::size_t i = 0; i < b.parts.size(); ++i) terms.emplace_back(b.weights[i], b.parts[i]->support_function());
          return sum(std::move(terms));
        }
      },
      v);
}

void flatten(double w, const ConvexBody& K, std::vector<std::pair<double, ConvexBody>>& out) {
  if (const auto* c = K.as<ComboBody>()) {
    for (std::size_t i = 0; i < c->parts.size(); ++i) flatten(w * c->weights[i], *c->parts[i], out);
  } else {
    out.emplace_back(w, K);
  }
}

}  // namespace

SphericalFunction cone_support(const Vec3& P, double theta) {
  const Vec3 p = P.normalized();
  return SphericalFunction(
      [p, theta](const Vec3& u) {
        const double ang = std::acos(std::clamp(u.dot(p), -1.0, 1.0));
        return std::max(0.0, std::cos(std::max(0.0, ang - theta)));
      },
      Smoothness::C0, "cone_support", {{"type", "cone_support"}, {"P", vec_json(p)}, {"theta", theta}});
}

ConvexBody::ConvexBody(Variant v) : v_(std::move(v)), h_(compute_support(v_)) {}

std::string ConvexBody::kind() const {
  static const char* names[] = {"smooth", "ball", "cone", "cylinder", "combo"};
  return names[v_.index()];
}

nlohmann::json ConvexBody::to_json() const {
  return std::visit(
      [](const auto& b) -> nlohmann::json {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, SmoothBody>) {
          return {{"variant", "smooth"}, {"h", b.h.spec().is_null() ? nlohmann::json(b.h.label()) : b.h.spec()}};
        } else if constexpr (std::is_same_v<T, BallBody>) {
          return {{"variant", "ball"}, {"r", b.r}, {"center", vec_json(b.center)}};
        } else if constexpr (std::is_same_v<T, ConeBody>) {
          return {{"variant", "cone"}, {"P", vec_json(b.P)}, {"theta", b.theta}, {"scale", b.scale}};
        } else if constexpr (std::is_same_v<T, CylinderBody>) {
          return {{"variant", "cylinder"}, {"base", b.base.spec()}, {"lambda", b.lambda}, {"axis", vec_json(b.axis)}};
        } else {
          nlohmann::json parts = nlohmann::json::array();
          for (std::size_t i = 0; i < b.parts.size(); ++i)
            parts.push_back({{"weight", b.weights[i]}, {"body", b.parts[i]->to_json()}});
          return {{"variant", "combo"}, {"parts", parts}};
        }
      },
      v_);
}

ConvexBody smooth_body(SphericalFunction h) { return ConvexBody(SmoothBody{std::move(h)}); }

ConvexBody ball(double r, const Vec3& center) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("ball: radius must be finite and non-negative");
  return ConvexBody(BallBody{r, center});
}

ConvexBody cone(const Vec3& P, double theta, double scale) {
  if (!(theta > 0.0 && theta < M_PI / 2.0)) throw InvalidArgument("cone: theta must lie in (0, pi/2)");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidArgument("cone: scale must be positive");
  return ConvexBody(ConeBody{unit_or_throw(P, "cone apex direction"), theta, scale});
}

ConvexBody cylinder(PlanarBody base, double lambda, const Vec3& axis) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("cylinder: lambda must be positive");
  return ConvexBody(CylinderBody{std::move(base), lambda, unit_or_throw(axis, "cylinder axis")});
}

ConvexBody minkowski_combine(const std::vector<std::pair<double, ConvexBody>>& parts) {
  if (parts.empty()) throw InvalidArgument("minkowski_combine: need at least one part");
  std::vector<std::pair<double, ConvexBody>> leaves;
  for (const auto& [w, K] : parts) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("minkowski_combine: weights must be finite and non-negative");
    flatten(w, K, leaves);
  }

  bool all_balls = true, all_smooth = true;
  for (const auto& [w, K] : leaves) {
    all_balls = all_balls && K.as<BallBody>();
    all_smooth = all_smooth && (K.as<BallBody>() || K.as<SmoothBody>());
  }
  double r = 0.0;
  Vec3 c = Vec3::Zero();
  bool has_ball = false;
  std::vector<std::pair<double, SphericalFunction>> smooth_terms;
  for (const auto& [w, K] : leaves) {
    if (const auto* b = K.as<BallBody>()) {
      r += w * b->r;
      c += w * b->center;
      has_ball = true;
    } else if (const auto* s = K.as<SmoothBody>()) {
      smooth_terms.emplace_back(w, s->h);
    }
  }
  if (all_balls) return ball(r, c);
  std::optional<SphericalFunction> smooth_sum;
  if (!smooth_terms.empty()) smooth_sum = sum(smooth_terms);
  // a localized perturbation of a ball stays split so F can integrate it on its own rule
  const bool localized = has_ball && r > 0.0 && smooth_sum && smooth_sum->support();
  if (all_smooth && !localized) {
    if (has_ball) smooth_terms.emplace_back(1.0, ball_support(r, c));
    return smooth_body(sum(std::move(smooth_terms)));
  }

  ComboBody out;
  std::vector<ConeBody> cones;
  for (const auto& [w, K] : leaves) {
    if (w == 0.0) continue;
    if (const auto* k = K.as<ConeBody>()) {
      bool merged = false;
      for (auto& m : cones) {
        if ((m.P - k->P).norm() < 1e-14 && std::abs(m.theta - k->theta) < 1e-14) {
          m.scale += w * k->scale;
          merged = true;
        }
      }
      if (!merged) cones.push_back({k->P, k->theta, w * k->scale});
    } else if (K.as<CylinderBody>()) {
      out.weights.push_back(w);
      out.parts.push_back(std::make_shared<const ConvexBody>(K));
    }
  }
  for (const auto& k : cones) {
    out.weights.push_back(1.0);
    out.parts.push_back(std::make_shared<const ConvexBody>(ConvexBody(k)));
  }
  if (has_ball) {
    out.weights.push_back(1.0);
    out.parts.push_back(std::make_shared<const ConvexBody>(ball(r, c)));
  }
  if (smooth_sum) {
    out.weights.push_back(1.0);
    out.parts.push_back(std::make_shared<const ConvexBody>(smooth_body(*smooth_sum)));
  }
  if (out.parts.size() == 1 && out.weights[0] == 1.0) return *out.parts[0];
  return ConvexBody(std::move(out));
}

ConvexBody body_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw InvalidArgument("body spec must be a JSON object");
    const std::string v = j.at("variant").get<std::string>();
    static const std::map<std::string, std::vector<std::string>> keys = {{"smooth", {"h"}},
                                                                        {"ball", {"r", "center"}},
                                                                        {"cone", {"P", "theta", "scale"}},
                                                                        {"cylinder", {"base", "lambda", "axis"}},
                                                                        {"combo", {"parts"}}};
    if (auto it = keys.find(v); it != keys.end())
      for (const auto& [k, val] : j.items())
        if (k != "variant" && std::find(it->second.begin(), it->second.end(), k) == it->second.end())
          throw InvalidArgument("body spec: unknown key '" + k + "' for variant " + v);
    if (v == "smooth") return smooth_body(function_from_json(j.at("h")));
    if (v == "ball") return ball(j.value("r", 1.0), j.contains("center") ? read_vec(j.at("center")) : Vec3::Zero());
    if (v == "cone") return cone(read_vec(j.at("P")), j.at("theta").get<double>(), j.value("scale", 1.0));
    if (v == "cylinder")
      return cylinder(planar_from_json(j.at("base")), j.value("lambda", 1.0),
                      j.contains("axis") ? read_vec(j.at("axis")) : Vec3::UnitZ());
    if (v == "combo") {
      std::vector<std::pair<double, ConvexBody>> parts;
      for (const auto& p : j.at("parts")) parts.emplace_back(p.value("weight", 1.0), body_from_json(p.at("body")));
      return minkowski_combine(parts);
    }
    throw InvalidArgument("unknown body variant '" + v + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("body spec: ") + e.what());
  }
}

EpsilonResult perturbation_epsilon(const SphericalFunction& h, const SphericalFunction& phi, const SphereGrid& grid,
                                   const FdOptions& opts) {
  Quadrature rule = grid.rule;
  if (const auto& s = phi.support(); s && s->rule) rule = s->rule(grid.level);
  const auto jh = jet_field(h, rule, opts);
  const auto jp = jet_field(phi, rule, opts);
  EpsilonResult r;
  r.gamma = std::numeric_limits<double>::infinity();
  double phi_max = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    phi_max = std::max(phi_max, std::abs(jp[i].value));
    r.M = std::max(r.M, jp[i].q.spectral_norm());
    // only nodes where the perturbation acts constrain gamma
    if (jp[i].value != 0.0 || jp[i].q.spectral_norm() != 0.0) r.gamma = std::min(r.gamma, jh[i].q.eigenvalues()[0]);
  }
  if (r.M <= 1e-8 * (1.0 + phi_max)) {
    r.unbounded = true;
    r.eps = std::numeric_limits<double>::infinity();
    return r;
  }
  if (!(r.gamma > 0.0)) throw NotSupportFunction("perturbation_epsilon: Q(h) is not positive definite where phi acts");
  r.eps = r.gamma / r.M;
  return r;
}

ConvexityResult support_convexity_oracle(const SphericalFunction& f, int samples, unsigned long long seed) {
  if (samples < 1) throw InvalidArgument("support_convexity_oracle: samples must be positive");
  Rng rng(seed);
  ConvexityResult res;
  for (int i = 0; i < samples; ++i) {
    const Vec3 x = rng.uniform(0.5, 1.5) * rng.unit_vector();
    const double len = std::exp(rng.uniform(std::log(1e-3), 0.0));
    const Vec3 y = x + len * rng.unit_vector();
    // keep the segment away from the origin, where H is not differentiable
    const Vec3 d = y - x;
    const double t = std::clamp(-x.dot(d) / d.squaredNorm(), 0.0, 1.0);
    if ((x + t * d).norm() < 0.25) continue;
    ++res.samples;
    const double gap = f.homogeneous(0.5 * (x + y)) - 0.5 * (f.homogeneous(x) + f.homogeneous(y));
    if (gap > 1e-9 && gap > res.gap) {
      res.convex = false;
      res.x = x;
      res.y = y;
      res.gap = gap;
    }
  }
  return res;
}

}  // namespace sphbm
