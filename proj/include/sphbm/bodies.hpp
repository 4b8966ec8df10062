#pragma once

#include <json.hpp>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "sphbm/calculus.hpp"
#include "sphbm/planar.hpp"
#include "sphbm/spherical_function.hpp"

namespace sphbm {

class ConvexBody;

/// Body of class C^2_+ given by its support function.
struct SmoothBody {
  SphericalFunction h;
};

struct BallBody {
  double r = 1.0;
  Vec3 center = Vec3::Zero();
};

/// scale times the convex hull of the origin and the cap of aperture theta around P.
struct ConeBody {
  Vec3 P = Vec3::UnitZ();
  double theta = 0.5;
  double scale = 1.0;
};

/// base x [0, lambda * axis], base lying in the plane orthogonal to axis with coordinates tangent_basis(axis).
struct CylinderBody {
  PlanarBody base;
  double lambda = 1.0;
  Vec3 axis = Vec3::UnitZ();
};

/// Minkowski combination sum_i weights[i] * parts[i]; built by minkowski_combine, which keeps it flat.
struct ComboBody {
  std::vector<double> weights;
  std::vector<std::shared_ptr<const ConvexBody>> parts;
};

class ConvexBody {
 public:
  using Variant = std::variant<SmoothBody, BallBody, ConeBody, CylinderBody, ComboBody>;

  ConvexBody(Variant v);

  const Variant& variant() const { return v_; }
  std::string kind() const;
  template <class T>
  const T* as() const {
    return std::get_if<T>(&v_);
  }

  /// h_K as a spherical function (not smooth for cones and cylinders).
  const SphericalFunction& support_function() const { return h_; }

  nlohmann::json to_json() const;

 private:
  Variant v_;
  SphericalFunction h_;
};

ConvexBody smooth_body(SphericalFunction h);
ConvexBody ball(double r = 1.0, const Vec3& center = Vec3::Zero());
ConvexBody cone(const Vec3& P, double theta, double scale = 1.0);
ConvexBody cylinder(PlanarBody base, double lambda, const Vec3& axis);

/// sum_i w_i K_i. Nested combinations are flattened; a combination of smooth bodies and balls collapses to a
/// smooth body; cones with the same apex direction and aperture merge into one.
ConvexBody minkowski_combine(const std::vector<std::pair<double, ConvexBody>>& parts);

ConvexBody body_from_json(const nlohmann::json& spec);

/// Support function of the cone C(P, theta) (unit scale).
SphericalFunction cone_support(const Vec3& P, double theta);

struct EpsilonResult {
  bool unbounded = false;
  double eps = 0.0;
  double gamma = 0.0;  ///< min lambda_min Q(h) over the nodes checked
  double M = 0.0;      ///< max spectral norm of Q(phi)
};

/// eps = gamma / M; the nodes are those of phi's support rule when it has one, the grid otherwise.
EpsilonResult perturbation_epsilon(const SphericalFunction& h, const SphericalFunction& phi, const SphereGrid& grid,
                                   const FdOptions& opts = {});

struct ConvexityResult {
  bool convex = true;
  int samples = 0;
  /// Violating segment [x, y] when not convex.
  Vec3 x = Vec3::Zero(), y = Vec3::Zero();
  /// H(midpoint) - (H(x) + H(y)) / 2 of the witness.
  double gap = 0.0;
};

/// Brute-force midpoint convexity test of the homogeneous extension on random segments.
ConvexityResult support_convexity_oracle(const SphericalFunction& f, int samples, unsigned long long seed = 20240531);

}  // namespace sphbm
