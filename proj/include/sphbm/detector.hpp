#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "sphbm/functional.hpp"
#include "sphbm/sawtooth.hpp"

namespace sphbm {

enum class Decision { support, not_support };

struct DetectionReport {
  Decision decision = Decision::support;
  double lambda_min = 0.0;
  Vec3 argmin_node = Vec3::UnitZ();
  /// Eigenvector of lambda_min in tangent_basis(argmin_node) coordinates.
  Vec2 eigvec = Vec2::UnitX();
  /// Ambient direction of the other eigenvector: the direction in which the cofactor of Q is most negative.
  Vec3 sawtooth_direction = Vec3::UnitX();
  double tolerance = 0.0;
  double f_sup = 0.0;
  std::size_t nodes = 0;

  nlohmann::json to_json() const;
};

/// Tolerance of the PSD decision: 1e-6 (1 + sup |f|).
double psd_tolerance(double f_sup);

DetectionReport min_q_eigen_scan(const SphericalFunction& f, const SphereGrid& grid, const FdOptions& opts = {});

/// Lipschitz sawtooth at u0; `direction` in tangent_basis(u0) coordinates.
SphericalFunction build_sawtooth_test(const Vec3& u0, const Vec2& direction, double eps, double r);
/// The same with each factor smoothed at width `smoothing`.
SphericalFunction build_smoothed_sawtooth(const Vec3& u0, const Vec2& direction, double eps, double r, double smoothing);

struct SawtoothLadderEntry {
  double r = 0.0;
  double eps = 0.0;
};

/// r in {0.2, 0.1}, eps in {r/16, r/64}.
std::vector<SawtoothLadderEntry> sawtooth_ladder();
inline constexpr double kSmoothingFraction = 1.0 / 8.0;

struct SecondVariation {
  SphericalFunction phi = constant(0.0);
  double value = 0.0;
  SawtoothLadderEntry entry;
};

/// Searches the ladder for a smoothed sawtooth phi with 2 int f det Q(phi) > 0.
/// Throws InvalidArgument when the report does not show a clearly negative eigenvalue and NumericalFailure when the
/// ladder is exhausted.
SecondVariation second_variation_positive(const SphericalFunction& f, const DetectionReport& report,
                                          const SphereGrid& grid, const FdOptions& opts = {});

/// 2 int f det Q(phi) for smoothed phi, via the left side of the second-variation identity.
double sawtooth_second_variation(const SphericalFunction& f, const SphericalFunction& phi, const SphereGrid& grid,
                                 const FdOptions& opts = {});

/// The a.e. value for the Lipschitz sawtooth: int phi^2 tr Q(f) - int C[Q(f)](grad phi, grad phi).
double sawtooth_second_variation_ae(const SphericalFunction& f, const SawtoothParams& params, const SphereGrid& grid,
                                    const FdOptions& opts = {});

struct Witness {
  /// 1: F > 0 on the cone family; 2: F < 0, sqrt(-F) convexity fails.
  int case_id = 1;
  Vec3 P = Vec3::UnitZ(), Pbar = -Vec3::UnitZ();
  /// Cone aperture thetabar around Pbar and the apex region aperture theta = pi/2 - thetabar; NaN for ball bases.
  double theta = 0.0, thetabar = 0.0;
  SphericalFunction phi = constant(0.0);
  SawtoothLadderEntry sawtooth;
  double eta = 0.0;
  double s = 0.0;
  double second_variation = 0.0;
  VariationProfile profile;
  /// Base body (K_eta).
  ConvexBody base = ball();
  /// Bodies of the violating min-form instance: (base -+ s phi) scaled by scale0 / scale1.
  ConvexBody K0 = ball(), K1 = ball();
  double scale0 = 1.0, scale1 = 1.0;
  BMReport bm_instance;
  /// Numerical noise bound: the margin is below -delta.
  double delta = 0.0;
  int verify_level = 0;
  double verify_margin = 0.0;
  double verify_second_variation = 0.0;
  bool verified = false;

  nlohmann::json to_json() const;
};

enum class ViolationStatus { none, witness, inconclusive };

struct ViolationResult {
  ViolationStatus status = ViolationStatus::none;
  DetectionReport report;
  std::optional<Witness> witness;
  std::vector<std::string> log;

  nlohmann::json to_json() const;
};

inline const std::vector<double> kThetaBarLadder = {M_PI / 12.0, M_PI / 6.0, M_PI / 4.0, M_PI / 3.0};
inline const std::vector<double> kEtaLadder = {0.1, 0.05, 0.01};

/// Full pipeline: scan, then a cone + ball (or ball) base, a sawtooth perturbation and a rescaled min-form
/// instance with negative margin, re-checked one level finer.
ViolationResult find_bm_violation(const SphericalFunction& f, const SphereGrid& grid, const FdOptions& opts = {});

}  // namespace sphbm
