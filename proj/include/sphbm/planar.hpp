#pragma once

#include <functional>
#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "sphbm/types.hpp"

namespace sphbm {

/// Planar convex body given by its support function h(phi), phi the angle of the unit normal.
/// Every constructor supplies h'' in closed form so the radius of curvature h + h'' is exact.
class PlanarBody {
 public:
  using Fn = std::function<double(double)>;

  PlanarBody(Fn h, Fn h_dd, std::string label, nlohmann::json spec);

  double support(double phi) const { return h_(phi); }
  double support_dd(double phi) const { return hdd_(phi); }
  /// Density of the first-order area measure with respect to d(phi).
  double curvature_radius(double phi) const { return h_(phi) + hdd_(phi); }
  /// 1-homogeneous extension at x in R^2.
  double homogeneous(double x, double y) const;

  const std::string& label() const { return label_; }
  const nlohmann::json& spec() const { return spec_; }

 private:
  Fn h_, hdd_;
  std::string label_;
  nlohmann::json spec_;
};

PlanarBody planar_disk(double radius, double cx = 0.0, double cy = 0.0);
PlanarBody planar_ellipse(double a, double b, double rotation = 0.0, double cx = 0.0, double cy = 0.0);
PlanarBody planar_point(double px, double py);
/// c0 + sum_k (a_k cos(k phi) + b_k sin(k phi)), k starting at 1. Rejected unless h + h'' > 0.
PlanarBody planar_fourier(double c0, std::vector<double> a, std::vector<double> b);
PlanarBody planar_sum(const PlanarBody& K0, const PlanarBody& K1);
PlanarBody planar_scale(const PlanarBody& K, double s);

PlanarBody planar_from_json(const nlohmann::json& spec);

/// Function on S^1 as a function of angle.
struct CircleFunction {
  std::function<double(double)> eval;
  nlohmann::json spec;
};

CircleFunction circle_constant(double c);
CircleFunction circle_fourier(double c0, std::vector<double> a, std::vector<double> b);
CircleFunction circle_function_from_json(const nlohmann::json& spec);

/// Trapezoid nodes per planar integral; the integrands are periodic so the rule converges spectrally.
inline constexpr int kPlanarNodes = 4096;

/// int f(phi) (h + h'')(phi) dphi.
double planar_F(const CircleFunction& f, const PlanarBody& K, int nodes = kPlanarNodes);
double planar_perimeter(const PlanarBody& K, int nodes = kPlanarNodes);
/// (1/2) int h (h + h'') dphi.
double planar_area(const PlanarBody& K, int nodes = kPlanarNodes);

/// |F(K0 + K1) - F(K0) - F(K1)|.
double planar_additivity_residual(const PlanarBody& K0, const PlanarBody& K1, const CircleFunction& f,
                                  int nodes = kPlanarNodes);

/// Midpoint-convexity test of the homogeneous extension on random segments; true when no violation is found.
bool planar_convexity_check(const PlanarBody& K, int samples, unsigned long long seed = 7);

}  // namespace sphbm
