#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sphbm/bodies.hpp"

namespace sphbm {

/// Absolutely continuous part on some region, given by a rule and the density at its nodes.
struct DensityPatch {
  std::string label;
  Quadrature rule;
  std::vector<double> density;
};

struct Atom {
  Vec3 direction;
  double mass = 0.0;
};

/// Measure on the small circle of spherical radius `radius` around `center`, with linear density given as a
/// function of the azimuth in tangent_basis(center).
struct CurvePart {
  std::string label;
  Vec3 center;
  double radius = 0.0;
  std::function<double(double)> density;
};

struct AreaMeasure {
  std::vector<DensityPatch> patches;
  std::vector<Atom> atoms;
  std::vector<CurvePart> curves;
  /// Resolution used for curve quadrature.
  int level = 0;

  /// int f dS.
  double integrate(const SphericalFunction& f) const;
  double integrate(const std::function<double(const Vec3&)>& f) const;
  double total_mass() const;
  /// int u dS; vanishes for every closed body.
  Vec3 centroid() const;
};

/// S_2(K, .) on the rules of the given resolution. Smooth bodies must have Q(h) positive definite at every node.
AreaMeasure area_measure(const ConvexBody& K, const SphereGrid& grid, const FdOptions& opts = {});

/// Measure of a * C(P, theta) + eta * B in closed form.
AreaMeasure cone_ball_measure(const Vec3& P, double theta, double a, double eta, int level);

}  // namespace sphbm
