#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "sphbm/types.hpp"

namespace sphbm {

/// mt19937_64 with hand-rolled variates, so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  std::uint64_t bits() { return eng_(); }
  int index(int n) { return static_cast<int>(uniform() * n); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  Vec3 unit_vector() {
    Vec3 v;
    do {
      v = Vec3(normal(), normal(), normal());
    } while (v.norm() < 1e-12);
    return v.normalized();
  }

  /// Rotation about `axis` by `angle` (Rodrigues).
  static Mat3 axis_angle(const Vec3& axis, double angle) {
    const Vec3 a = axis.normalized();
    Mat3 K;
    K << 0, -a.z(), a.y(), a.z(), 0, -a.x(), -a.y(), a.x(), 0;
    return Mat3::Identity() + std::sin(angle) * K + (1.0 - std::cos(angle)) * K * K;
  }

  /// Haar-distributed rotation.
  Mat3 rotation() {
    // uniform unit quaternion
    const double q0 = normal(), q1 = normal(), q2 = normal(), q3 = normal();
    const double n = std::sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3);
    const double w = q0 / n, x = q1 / n, y = q2 / n, z = q3 / n;
    Mat3 R;
    R << 1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w), 2 * (x * y + z * w),
        1 - 2 * (x * x + z * z), 2 * (y * z - x * w), 2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y);
    return R;
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sphbm
