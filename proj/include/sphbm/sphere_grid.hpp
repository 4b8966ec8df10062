#pragma once

#include <json.hpp>
#include <vector>

#include "sphbm/types.hpp"

namespace sphbm {

/// Nodes on the unit sphere with positive weights (a quadrature rule on some region of S^2).
struct Quadrature {
  std::vector<Vec3> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  double total_weight() const;
};

enum class GridScheme {
  /// Gauss-Legendre in z times uniform azimuth. Exact for polynomials of degree <= exactness_degree().
  gauss_product,
  /// Subdivided icosahedron, weights are one third of the incident spherical triangle areas.
  icosphere,
};

/// Discretization of the whole sphere. Weights always sum to 4*pi.
struct SphereGrid {
  GridScheme scheme = GridScheme::gauss_product;
  int level = 0;
  Quadrature rule;

  const std::vector<Vec3>& nodes() const { return rule.nodes; }
  const std::vector<double>& weights() const { return rule.weights; }
  std::size_t size() const { return rule.size(); }

  /// Polynomial degree integrated exactly; -1 when the scheme declares none (icosphere).
  int exactness_degree() const;
};

/// Right-handed orthonormal triple {e1, e2, base}.
struct TangentFrame {
  Vec3 base;
  Vec3 e1;
  Vec3 e2;

  Vec3 to_ambient(double v1, double v2) const { return v1 * e1 + v2 * e2; }
};

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// Product rule of `level`: 2^(level+1) latitude nodes and twice as many longitudes.
SphereGrid build_grid(int level);

/// Icosphere with 10*4^level + 2 nodes.
SphereGrid build_icosphere(int level);

/// Rule on the zone { u : psi0 <= angle(u, axis) <= psi1 }, Gauss in the polar angle.
/// Resolution follows the same level convention as build_grid.
Quadrature build_zone_rule(const Vec3& axis, double psi0, double psi1, int level);

/// Frame built from polar / azimuthal directions: e1 = d/dtheta, e2 = d/dphi.
/// At the exceptional poles u = (0,0,+-1) it falls back to e1 = x, e2 = +-y.
TangentFrame tangent_basis(const Vec3& u);

nlohmann::json grid_to_json(const Quadrature& rule);

/// Uniform nodes on a small circle: u(phi) = cos(r) c + sin(r) (cos(phi) a + sin(phi) b),
/// with (a, b) = tangent_basis(c).
struct CircleRule {
  Vec3 center;
  double radius = 0.0;
  std::vector<double> angles;
  std::vector<Vec3> nodes;
  /// Arc-length weights (sum to 2*pi*sin(radius)).
  std::vector<double> weights;
};

CircleRule build_circle_rule(const Vec3& center, double spherical_radius, int level);

}  // namespace sphbm
