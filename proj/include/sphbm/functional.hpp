#pragma once

#include <json.hpp>
#include <optional>

#include "sphbm/area_measure.hpp"

namespace sphbm {

/// F(K) = int f dS_2(K, .).
/// Besides bodies with a closed-form measure, accepts a * C(P, theta) + eta * B + (smooth part supported inside the
/// cap of aperture pi/2 - theta around -P), split into the closed-form cone + ball measure and a local correction.
double evaluate_F(const SphericalFunction& f, const ConvexBody& K, const SphereGrid& grid, const FdOptions& opts = {});

/// V(K, K, L) = F_{h_L}(K) / 3. Throws NotSupportFunction when h_L fails the convexity oracle.
double mixed_volume(const ConvexBody& K, const SphericalFunction& h_L, const SphereGrid& grid, const FdOptions& opts = {});

enum class BMForm {
  /// sqrt(F(K_t)) >= (1 - t) sqrt(F(K0)) + t sqrt(F(K1)); needs F >= 0.
  concave_root,
  /// F(K_t) >= min(F(K0), F(K1)).
  min_form,
  /// sqrt(-F) convex: (1 - t) sqrt(-F(K0)) + t sqrt(-F(K1)) >= sqrt(-F(K_t)); needs F <= 0.
  negative_root,
};

const char* to_string(BMForm f);
BMForm bm_form_from_string(const std::string& s);

struct BMReport {
  BMForm form = BMForm::min_form;
  double t = 0.0;
  double F0 = 0.0, F1 = 0.0, Ft = 0.0;
  double lhs = 0.0, rhs = 0.0;
  /// lhs - rhs.
  double margin = 0.0;
  nlohmann::json bodies;

  nlohmann::json to_json() const;
};

/// Assembles a report from the three values; throws Unsupported when the form does not apply to their signs.
BMReport bm_report_from_values(BMForm form, double t, double F0, double F1, double Ft);

BMReport bm_check(const SphericalFunction& f, const ConvexBody& K0, const ConvexBody& K1, double t, BMForm form,
                  const SphereGrid& grid, const FdOptions& opts = {});

/// Bodies K_i / sqrt(|F(K_i)|) and t' = t sqrt|F1| / ((1 - t) sqrt|F0| + t sqrt|F1|), under which the
/// root-form instance becomes a min-form instance with values +-1 at the ends.
struct RescaledInstance {
  ConvexBody K0, K1;
  double t = 0.0;
  double s0 = 1.0, s1 = 1.0;  ///< applied scale factors
};

RescaledInstance case1_rescale(const ConvexBody& K0, const ConvexBody& K1, double t, double F0, double F1);

struct VariationProfile {
  double F0 = 0.0, F1 = 0.0, F2 = 0.0;
  double fd_F1 = 0.0, fd_F2 = 0.0;
  /// Certified perturbation range; infinite when Q(phi) vanishes.
  double eps = 0.0;
  double fd_step = 0.0;
  /// True when the finite differences went through evaluate_F on the perturbed bodies themselves.
  bool independent_fd = false;

  static double tolerance(double v) { return std::max(1e-5, 1e-3 * std::abs(v)); }
  bool consistent() const {
    return std::abs(F1 - fd_F1) <= tolerance(F1) && std::abs(F2 - fd_F2) <= tolerance(F2);
  }
  /// F(s) = F0 + F1 s + F2 s^2 / 2 exactly, since det is quadratic.
  double F_at(double s) const { return F0 + F1 * s + 0.5 * F2 * s * s; }
  nlohmann::json to_json() const;
};

/// Profile of s -> F(h + s phi) at s = 0.
VariationProfile variation_profile(const SphericalFunction& f, const SphericalFunction& h, const SphericalFunction& phi,
                                   const SphereGrid& grid, const FdOptions& opts = {});

/// Same for K + s phi, K a smooth body or a cone + ball combination; phi must then be supported inside the
/// region where K is smooth (its apex region).
VariationProfile variation_profile(const SphericalFunction& f, const ConvexBody& K, const SphericalFunction& phi,
                                   const SphereGrid& grid, const FdOptions& opts = {});

/// K + s phi as a body.
ConvexBody perturbed_body(const ConvexBody& K, const SphericalFunction& phi, double s);

}  // namespace sphbm
