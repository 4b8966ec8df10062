#include "sphbm/area_measure.hpp"

#include <cmath>

#include "sphbm/kernels.hpp"

namespace sphbm {

double AreaMeasure::integrate(const std::function<double(const Vec3&)>& f) const {
  double acc = 0.0;
  for (const auto& p : patches) {
    const std::vector<double> v = map_nodes(p.rule.nodes, f);
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = p.rule.weights[i] * p.density[i];
    acc += weighted_sum(w, v);
  }
  for (const auto& a : atoms) acc += a.mass * f(a.direction);
  for (const auto& c : curves) {
    const CircleRule cr = build_circle_rule(c.center, c.radius, level);
    std::vector<double> terms(cr.nodes.size());
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = cr.weights[i] * c.density(cr.angles[i]) * f(cr.nodes[i]);
    acc += ordered_sum(terms);
  }
  return acc;
}

double AreaMeasure::integrate(const SphericalFunction& f) const {
  return integrate([&f](const Vec3& u) { return f(u); });
}

double AreaMeasure::total_mass() const {
  return integrate([](const Vec3&) { return 1.0; });
}

Vec3 AreaMeasure::centroid() const {
  Vec3 c;
  for (int k = 0; k < 3; ++k) c[k] = integrate([k](const Vec3& u) { return u[k]; });
  return c;
}

AreaMeasure cone_ball_measure(const Vec3& P, double theta, double a, double eta, int level) {
  if (!(theta > 0.0 && theta < M_PI / 2.0)) throw InvalidArgument("cone measure: theta must lie in (0, pi/2)");
  if (!(a > 0.0) || !(eta >= 0.0)) throw InvalidArgument("cone measure: need scale > 0 and eta >= 0");
  const Vec3 p = P.normalized();
  AreaMeasure m;
  m.level = level;

  DensityPatch cap{"cap", build_zone_rule(p, 0.0, theta, level), {}};
  cap.density.assign(cap.rule.size(), (a + eta) * (a + eta));
  m.patches.push_back(std::move(cap));

  if (eta > 0.0) {
    DensityPatch band{"rim", build_zone_rule(p, theta, theta + M_PI / 2.0, level), {}};
    band.density.resize(band.rule.size());
    for (std::size_t i = 0; i < band.rule.size(); ++i) {
      const double psi = std::acos(std::clamp(band.rule.nodes[i].dot(p), -1.0, 1.0));
      band.density[i] = a * eta * std::sin(theta) / std::sin(psi) + eta * eta;
    }
    m.patches.push_back(std::move(band));

    DensityPatch apex{"apex", build_zone_rule(p, theta + M_PI / 2.0, M_PI, level), {}};
    apex.density.assign(apex.rule.size(), eta * eta);
    m.patches.push_back(std::move(apex));
  }

  const double lin = a * a * std::tan(theta) / 2.0 + a * eta;
  m.curves.push_back({"lateral", -p, M_PI / 2.0 - theta, [lin](double) { return lin; }});
  return m;
}

namespace {

AreaMeasure smooth_measure(const SphericalFunction& h, const SphereGrid& grid, const FdOptions& opts) {
  const auto jets = jet_field(h, grid.rule, opts);
  DensityPatch p{"density", grid.rule, std::vector<double>(grid.size())};
  for (std::size_t i = 0; i < jets.size(); ++i) {
    if (!(jets[i].q.eigenvalues()[0] > 0.0))
      throw NotSupportFunction("area_measure: Q(h) is not positive definite at node " + std::to_string(i) + " for '" +
                               h.label() + "'");
    p.density[i] = jets[i].q.det();
  }
  AreaMeasure m;
  m.level = grid.level;
  m.patches.push_back(std::move(p));
  return m;
}

AreaMeasure cylinder_measure(const CylinderBody& z, int level) {
  AreaMeasure m;
  m.level = level;
  const double A = planar_area(z.base);
  m.atoms.push_back({z.axis, A});
  m.atoms.push_back({-z.axis, A});
  m.curves.push_back({"lateral", z.axis, M_PI / 2.0,
                      [base = z.base, lambda = z.lambda](double phi) { return lambda * base.curvature_radius(phi); }});
  return m;
}

}  // namespace

AreaMeasure area_measure(const ConvexBody& K, const SphereGrid& grid, const FdOptions& opts) {
  if (const auto* s = K.as<SmoothBody>()) return smooth_measure(s->h, grid, opts);
  if (const auto* b = K.as<BallBody>()) {
    AreaMeasure m;
    m.level = grid.level;
    m.patches.push_back({"density", grid.rule, std::vector<double>(grid.size(), b->r * b->r)});
    return m;
  }
  if (const auto* c = K.as<ConeBody>()) return cone_ball_measure(c->P, c->theta, c->scale, 0.0, grid.level);
  if (const auto* z = K.as<CylinderBody>()) return cylinder_measure(*z, grid.level);
  const auto& combo = *K.as<ComboBody>();
  const ConeBody* k = nullptr;
  const BallBody* b = nullptr;
  for (std::size_t i = 0; i < combo.parts.size(); ++i) {
    const auto& part = *combo.parts[i];
    if (combo.weights[i] != 1.0) throw Unsupported("area_measure: combination outside the closed forms");
    if (part.as<ConeBody>() && !k) k = part.as<ConeBody>();
    else if (part.as<BallBody>() && !b) b = part.as<BallBody>();
    else throw Unsupported("area_measure: only cone + ball combinations have a closed-form measure");
  }
  if (!k || !b) throw Unsupported("area_measure: only cone + ball combinations have a closed-form measure");
  return cone_ball_measure(k->P, k->theta, k->scale, b->r, grid.level);
}

}  // namespace sphbm
