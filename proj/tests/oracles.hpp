#pragma once

// Independent reference computations. Nothing here calls into the library's quadrature or calculus code.

#include <cmath>
#include <functional>

#include "sphbm/types.hpp"

namespace oracle {

using sphbm::Mat3;
using sphbm::Vec3;

/// int_{S^2} x^a y^b z^c = 2 G(A) G(B) G(C) / G(A + B + C), A = (a + 1) / 2 etc., zero if any exponent is odd.
inline double monomial_integral(int a, int b, int c) {
  if (a % 2 || b % 2 || c % 2) return 0.0;
  const double A = 0.5 * (a + 1), B = 0.5 * (b + 1), C = 0.5 * (c + 1);
  return 2.0 * std::exp(std::lgamma(A) + std::lgamma(B) + std::lgamma(C) - std::lgamma(A + B + C));
}

inline double tri_area(const Vec3& a, const Vec3& b, const Vec3& c) { return 0.5 * (b - a).cross(c - a).norm(); }

/// Flat triangulation of a parametric surface on [u0, u1] x [0, 2 pi).
inline double parametric_mesh_area(const std::function<Vec3(double, double)>& X, double u0, double u1, int nu,
                                   int nv) {
  double area = 0.0;
  for (int i = 0; i < nu; ++i) {
    const double a = u0 + (u1 - u0) * i / nu, b = u0 + (u1 - u0) * (i + 1) / nu;
    for (int j = 0; j < nv; ++j) {
      const double c = 2.0 * M_PI * j / nv, d = 2.0 * M_PI * (j + 1) / nv;
      const Vec3 p00 = X(a, c), p10 = X(b, c), p01 = X(a, d), p11 = X(b, d);
      area += tri_area(p00, p10, p11) + tri_area(p00, p11, p01);
    }
  }
  return area;
}

/// Surface area of the cone C(z, theta) from a triangulated mesh: spherical cap plus lateral fan to the origin.
/// Richardson extrapolation over two resolutions removes the h^2 term.
inline double cone_mesh_area(double theta, int n) {
  auto once = [theta](int m) {
    auto cap = [](double psi, double phi) {
      return Vec3(std::sin(psi) * std::cos(phi), std::sin(psi) * std::sin(phi), std::cos(psi));
    };
    double area = parametric_mesh_area(cap, 0.0, theta, m, 4 * m);
    for (int j = 0; j < 4 * m; ++j) {
      const double c = 2.0 * M_PI * j / (4 * m), d = 2.0 * M_PI * (j + 1) / (4 * m);
      area += tri_area(Vec3::Zero(), cap(theta, c), cap(theta, d));
    }
    return area;
  };
  const double a1 = once(n), a2 = once(2 * n);
  return (4.0 * a2 - a1) / 3.0;
}

/// Surface area of the ellipsoid with semi-axes (a, b, c), by Richardson-extrapolated flat triangulation.
inline double ellipsoid_mesh_area(double a, double b, double c, int n) {
  auto X = [=](double t, double p) {
    return Vec3(a * std::sin(t) * std::cos(p), b * std::sin(t) * std::sin(p), c * std::cos(t));
  };
  const double a1 = parametric_mesh_area(X, 0.0, M_PI, n, 2 * n);
  const double a2 = parametric_mesh_area(X, 0.0, M_PI, 2 * n, 4 * n);
  return (4.0 * a2 - a1) / 3.0;
}

/// D^2 of H(x) = sqrt(x^T A x): A / H - (A x)(A x)^T / H^3.
inline Mat3 ellipsoid_hessian(const Mat3& A, const Vec3& x) {
  const Vec3 Ax = A * x;
  const double H = std::sqrt(x.dot(Ax));
  return A / H - Ax * Ax.transpose() / (H * H * H);
}

inline double ellipsoid_volume(double a, double b, double c) { return 4.0 * M_PI / 3.0 * a * b * c; }

/// Volume of C(P, theta): a spherical sector.
inline double cone_volume(double theta) { return 2.0 * M_PI / 3.0 * (1.0 - std::cos(theta)); }

/// max over sampled boundary points of (x, u) for the body conv(0, cap(P, theta)).
inline double cone_support_bruteforce(const Vec3& P, double theta, const Vec3& u, int n = 400) {
  Vec3 a = std::abs(P.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  a = (a - a.dot(P) * P).normalized();
  const Vec3 b = P.cross(a);
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double psi = theta * i / n;
    for (int j = 0; j < 4 * n; ++j) {
      const double phi = 2.0 * M_PI * j / (4 * n);
      const Vec3 x = std::cos(psi) * P + std::sin(psi) * (std::cos(phi) * a + std::sin(phi) * b);
      best = std::max(best, x.dot(u));
    }
  }
  return best;
}

}  // namespace oracle
