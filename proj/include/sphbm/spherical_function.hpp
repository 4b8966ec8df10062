#pragma once

#include <functional>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sphbm/sphere_grid.hpp"
#include "sphbm/types.hpp"

namespace sphbm {

enum class Smoothness { C0 = 0, C2 = 2, Cinf = 3 };

const char* to_string(Smoothness s);

/// Where a compactly supported function lives, together with a quadrature rule adapted to it.
struct SupportPatch {
  Vec3 center;
  /// Spherical radius of a cap containing the support.
  double radius = 0.0;
  std::function<Quadrature(int level)> rule;
};

/// Closed-form first and second order data at a point u of the sphere.
struct AmbientJet {
  double value = 0.0;
  /// Tangential gradient, as an ambient vector orthogonal to u.
  Vec3 grad = Vec3::Zero();
  /// Q(f, u) = Hess f + f I acting on the tangent plane, embedded as a 3x3 matrix: Q_ij = e_i^T q e_j.
  Mat3 q = Mat3::Zero();
};

/// Scalar field on S^2. Cheap to copy; the callable is shared and must be safe to call concurrently.
class SphericalFunction {
 public:
  using Eval = std::function<double(const Vec3&)>;
  using JetFn = std::function<AmbientJet(const Vec3&)>;

  SphericalFunction(Eval eval, Smoothness smoothness, std::string label, nlohmann::json spec = nullptr,
                    double feature_scale = 1.0);

  double operator()(const Vec3& u) const { return impl_->eval(u); }

  /// 1-homogeneous extension |x| f(x/|x|).
  double homogeneous(const Vec3& x) const {
    const double r = x.norm();
    return r * impl_->eval(x / r);
  }

  Smoothness smoothness() const { return impl_->smoothness; }
  const std::string& label() const { return impl_->label; }
  /// Serializable description (see function_spec.hpp); null when the function was built from a raw callable.
  const nlohmann::json& spec() const { return impl_->spec; }
  /// Length scale of the finest feature; finite-difference steps are capped by it.
  double feature_scale() const { return impl_->feature_scale; }
  const std::optional<SupportPatch>& support() const { return impl_->support; }
  /// Closed-form derivatives when available; calculus routines prefer it over finite differences.
  const JetFn& jet() const { return impl_->jet; }

  SphericalFunction with_support(SupportPatch patch) const;
  SphericalFunction with_label(std::string label) const;
  SphericalFunction with_jet(JetFn jet) const;

 private:
  struct Impl {
    Eval eval;
    Smoothness smoothness;
    std::string label;
    nlohmann::json spec;
    double feature_scale;
    std::optional<SupportPatch> support;
    JetFn jet;
  };
  std::shared_ptr<const Impl> impl_;
};

// Builtin closed forms. Each carries its JSON spec so it can be written back out.

SphericalFunction constant(double c);
SphericalFunction linear(const Vec3& a);
/// Support function of the ellipsoid { x : x^T A^{-1} x <= 1 }, i.e. sqrt(u^T A u).
SphericalFunction ellipsoid(const Mat3& A);
/// Support function of the axis-aligned ellipsoid with the given semi-axes.
SphericalFunction ellipsoid_axes(const Vec3& semi_axes);
/// c + u^T M u (M symmetrized).
SphericalFunction quadratic(double c, const Mat3& M);
/// sum_k coeffs[k] * (axis, u)^k.
SphericalFunction zonal(const Vec3& axis, std::vector<double> coeffs);
/// |u_index|; the support function of a segment, not C^2.
SphericalFunction abs_coordinate(int index);
/// scale * exp((w, u)).
SphericalFunction exp_linear(const Vec3& w, double scale);
/// sum_i weights[i] * terms[i].
SphericalFunction sum(std::vector<std::pair<double, SphericalFunction>> terms);
/// x -> f(rho^{-1} x). rho must be a proper rotation.
SphericalFunction rotate_function(const SphericalFunction& f, const Mat3& rho);
/// Smooth kernel-weighted interpolation of nodal samples.
SphericalFunction nodal(std::vector<Vec3> nodes, std::vector<double> values);

/// sum_i w_i f(u_i) over the rule, evaluated node-parallel and reduced in node order.
double integrate(const SphericalFunction& f, const Quadrature& rule);
double integrate_sphere(const SphericalFunction& f, const SphereGrid& grid);

/// Named functions used by the CLI as builtin:<name>.
SphericalFunction builtin(const std::string& name);
std::vector<std::string> builtin_names();

/// Construct from a JSON spec (see README for the schema).
SphericalFunction function_from_json(const nlohmann::json& spec);

/// Accepts "builtin:<name>", a path to a JSON file, or inline JSON text.
SphericalFunction parse_function_arg(const std::string& arg);

}  // namespace sphbm
