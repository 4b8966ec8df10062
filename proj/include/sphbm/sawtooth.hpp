#pragma once

#include <vector>

#include "sphbm/spherical_function.hpp"

namespace sphbm {

/// Sawtooth test perturbation living in the chart x1 = (u, d), x2 = (u, u0 x d) around u0.
struct SawtoothParams {
  Vec3 center = Vec3::UnitZ();
  /// Ambient direction; it is projected to the tangent plane at center and normalized.
  Vec3 direction = Vec3::UnitX();
  double eps = 0.0;
  double r = 0.0;
  /// Width of the compact biweight kernel applied to each piecewise-linear factor; 0 keeps the Lipschitz function.
  double smoothing = 0.0;
  double amplitude = 1.0;
};

/// Value and chart derivatives of a piecewise-linear profile, optionally smoothed near its kinks.
struct Profile1D {
  double v = 0.0, d1 = 0.0, d2 = 0.0;
};

class SawtoothField {
 public:
  explicit SawtoothField(SawtoothParams p);

  const SawtoothParams& params() const { return p_; }
  const Vec3& d() const { return d_; }
  const Vec3& e() const { return e_; }
  /// Half-width of the chart square that contains the support (r plus the smoothing width).
  double half_width() const { return p_.r + p_.smoothing; }

  double chart_value(double x1, double x2) const;
  /// Partial derivatives of the chart function; the second derivatives vanish a.e. when smoothing is 0.
  void chart_derivatives(double x1, double x2, double& f, double& f1, double& f2, double& f11, double& f12,
                         double& f22) const;

  double value(const Vec3& u) const;
  /// Closed-form jet; for the unsmoothed field q only holds the a.e. part.
  AmbientJet jet(const Vec3& u) const;

  /// Kink positions of the chart function along x1 and x2 inside the support square.
  std::vector<double> breakpoints_x1() const;
  std::vector<double> breakpoints_x2() const;

  /// Composite Gauss rule on the lifted chart square, panels split at every kink.
  Quadrature chart_rule(int level) const;

 private:
  Profile1D wave(double x) const;
  Profile1D cutoff(double x) const;

  SawtoothParams p_;
  Vec3 d_, e_;
};

SphericalFunction sawtooth_function(const SawtoothParams& p);

/// Biweight-smoothed |x| profile helper: delta * p(x / delta) for |x| < delta.
double smoothed_abs(double x, double delta);

}  // namespace sphbm
