#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "sphbm/kernels.hpp"
#include "sphbm/sphere_grid.hpp"
#include "sphbm/spherical_function.hpp"

namespace sphbm {

using Vec2 = Eigen::Vector2d;

/// [[a, b], [b, c]].
struct SymMatrix2 {
  double a = 0.0, b = 0.0, c = 0.0;

  static SymMatrix2 identity() { return {1.0, 0.0, 1.0}; }

  double trace() const { return a + c; }
  double det() const { return a * c - b * b; }
  double frobenius() const { return std::sqrt(a * a + 2.0 * b * b + c * c); }
  /// Largest absolute eigenvalue.
  double spectral_norm() const;
  /// Ascending.
  std::array<double, 2> eigenvalues() const;
  /// Unit eigenvector of the given eigenvalue.
  Vec2 eigenvector(double lambda) const;
  Vec2 apply(const Vec2& v) const { return {a * v.x() + b * v.y(), b * v.x() + c * v.y()}; }
  double quad(const Vec2& v) const { return v.dot(apply(v)); }

  SymMatrix2 operator+(const SymMatrix2& o) const { return {a + o.a, b + o.b, c + o.c}; }
  SymMatrix2 operator-(const SymMatrix2& o) const { return {a - o.a, b - o.b, c - o.c}; }
  SymMatrix2 operator*(double s) const { return {s * a, s * b, s * c}; }
  bool operator==(const SymMatrix2&) const = default;
};

/// Cofactor matrix [[c, -b], [-b, a]].
SymMatrix2 cofactor(const SymMatrix2& A);

/// sum_ij X_ij Y_ij.
double contract(const SymMatrix2& X, const SymMatrix2& Y);

/// |det(A) - (1/2) sum_ij c_ij[A] a_ij|.
double trace_det_identity_check(const SymMatrix2& A);

enum class FdOrder { second = 2, fourth = 4 };

struct FdOptions {
  /// Base step; the effective step is min(step, feature_scale / 50).
  double step = 1e-3;
  FdOrder order = FdOrder::fourth;
  /// Use the closed-form jet of the function when it has one.
  bool use_jet = true;
};

double effective_step(const SphericalFunction& f, const FdOptions& opts);

/// D^2 H(u) for the 1-homogeneous extension H, by finite differences.
Mat3 homogeneous_hessian(const SphericalFunction& f, const Vec3& u, double step, FdOrder order = FdOrder::fourth);

struct QSample {
  Vec3 point = Vec3::UnitZ();
  SymMatrix2 q;
  TangentFrame frame;
  /// Ascending.
  std::array<double, 2> eigenvalues{};
  /// Frame coordinates of the unit eigenvector of eigenvalues[0].
  Vec2 min_eigvec = Vec2::UnitX();
};

QSample q_matrix(const SphericalFunction& f, const Vec3& u, const TangentFrame& frame, const FdOptions& opts = {});
QSample q_matrix(const SphericalFunction& f, const Vec3& u, const FdOptions& opts = {});

/// Value, tangential gradient and Q in a given frame.
struct LocalJet {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
  SymMatrix2 q;
};

LocalJet local_jet(const SphericalFunction& f, const TangentFrame& frame, const FdOptions& opts = {});

/// Jets at every node, each in tangent_basis(node).
std::vector<LocalJet> jet_field(const SphericalFunction& f, const Quadrature& rule, const FdOptions& opts = {},
                                Exec exec = default_exec());

/// Frame used at a node: tangent_basis of the node.
TangentFrame node_frame(const Vec3& u);

}  // namespace sphbm
