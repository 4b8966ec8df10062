#pragma once

#include <cstdint>
#include <json.hpp>
#include <memory>
#include <vector>

#include "sphbm/calculus.hpp"
#include "sphbm/random.hpp"

namespace sphbm {

/// xi(t) = exp(-1 / (1 - t^2)) on (-1, 1), 0 outside.
double bump_xi(double t);

/// omega_k(rho) = c_k xi(k^2 |rho - id|_F^2), represented by rotations drawn from Haar measure restricted to the
/// kernel support together with their kernel weights.
class RotationKernel {
 public:
  RotationKernel(int k, int samples, std::uint64_t seed);

  int k() const { return k_; }
  /// Largest rotation angle in the support: |rho - id|_F^2 = 4 (1 - cos angle) <= 1 / k^2.
  double max_angle() const { return alpha_max_; }
  /// Estimated normalizer c_k (independent stream of 1e5 samples).
  double c_k() const { return c_k_; }
  /// Haar probability of the support.
  double support_probability() const;

  const std::vector<Mat3>& rotations() const { return rot_; }
  const std::vector<double>& weights() const { return w_; }
  /// k^2 |rho - id|_F^2 per sample; at most 1 by construction.
  const std::vector<double>& arguments() const { return arg_; }

 private:
  int k_;
  double alpha_max_;
  double c_k_ = 0.0;
  std::vector<Mat3> rot_;
  std::vector<double> w_, arg_;
};

/// Rotation drawn from Haar measure conditioned on angle <= alpha_max.
Mat3 sample_rotation_near_identity(Rng& rng, double alpha_max, double* angle = nullptr);

struct MollifiedValue {
  double value = 0.0;
  /// Monte Carlo standard error of value.
  double sigma = 0.0;
};

/// f_k(u) = sum_s w_s f(rho_s u) / sum_s w_s. The same rotations serve every u.
class Mollified {
 public:
  Mollified(SphericalFunction f, int k, int samples, std::uint64_t seed);

  const RotationKernel& kernel() const { return *kernel_; }
  MollifiedValue evaluate(const Vec3& u) const;
  /// Values at the nodes of a rule, computed once per rule.
  const std::vector<MollifiedValue>& on_nodes(const Quadrature& rule) const;
  /// As a spherical function (smoothness Cinf).
  SphericalFunction function() const;

 private:
  struct State;
  std::shared_ptr<State> st_;
  std::shared_ptr<const RotationKernel> kernel_;
};

SphericalFunction mollify(const SphericalFunction& f, int k, int samples, std::uint64_t seed);

/// C^2 bumps supported in the cap of aperture theta_prime around P.
std::vector<SphericalFunction> cap_bump_battery(const Vec3& P, double theta_prime);

struct TransferRow {
  int k = 0;
  int battery_index = 0;
  double original = 0.0;   ///< int f det Q(phi)
  double mollified = 0.0;  ///< int f_k det Q(phi)
  bool agree = false;
};

struct TransferReport {
  std::vector<TransferRow> rows;
  std::vector<int> ks;
  /// Agreements per k, in ks order.
  std::vector<int> agreements;
  int battery_size = 0;
  nlohmann::json to_json() const;
};

/// Sign agreement of int f det Q(phi) and int f_k det Q(phi) over the bump battery and a ladder of k.
/// Integrals with |value| below `zero_tol` count as 0 and agree with each other.
TransferReport mollified_inequality_transfer(const SphericalFunction& f, double theta, double theta_prime,
                                             const SphereGrid& grid, const Vec3& P = Vec3::UnitZ(),
                                             std::vector<int> ks = {5, 10, 20, 40}, int samples = 2000,
                                             std::uint64_t seed = 7, double zero_tol = 1e-7);

}  // namespace sphbm
