#include "sphbm/sphere_grid.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace sphbm {

namespace {

constexpr double kPi = std::numbers::pi;

void check_level(int level) {
  if (level < 0 || level > 10) throw InvalidArgument("grid level must lie in [0, 10]");
}

int latitude_count(int level) { return 1 << (level + 1); }

}  // namespace

double Quadrature::total_weight() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

int SphereGrid::exactness_degree() const {
  if (scheme == GridScheme::icosphere) return -1;
  return 2 * latitude_count(level) - 1;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw InvalidArgument("gauss_legendre needs n >= 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute the derivative at the converged root
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

SphereGrid build_grid(int level) {
  check_level(level);
  const int nt = latitude_count(level);
  const int np = 2 * nt;
  std::vector<double> z, wz;
  gauss_legendre(nt, z, wz);

  SphereGrid grid;
  grid.scheme = GridScheme::gauss_product;
  grid.level = level;
  grid.rule.nodes.reserve(static_cast<std::size_t>(nt) * np);
  grid.rule.weights.reserve(static_cast<std::size_t>(nt) * np);
  for (int i = 0; i < nt; ++i) {
    const double s = std::sqrt(1.0 - z[i] * z[i]);
    for (int j = 0; j < np; ++j) {
      const double phi = 2.0 * kPi * j / np;
      Vec3 u(s * std::cos(phi), s * std::sin(phi), z[i]);
      grid.rule.nodes.push_back(u.normalized());
      grid.rule.weights.push_back(wz[i] * 2.0 * kPi / np);
    }
  }
  return grid;
}

SphereGrid build_icosphere(int level) {
  check_level(level);
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int idx = static_cast<int>(v.size()) - 1;
      mid.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int a = midpoint(f[0], f[1]);
      const int b = midpoint(f[1], f[2]);
      const int c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    faces = std::move(next);
  }

  SphereGrid grid;
  grid.scheme = GridScheme::icosphere;
  grid.level = level;
  grid.rule.nodes = v;
  grid.rule.weights.assign(v.size(), 0.0);
  for (const auto& f : faces) {
    const Vec3& a = v[f[0]];
    const Vec3& b = v[f[1]];
    const Vec3& c = v[f[2]];
    // spherical excess of the geodesic triangle
    const double num = std::abs(a.dot(b.cross(c)));
    const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    const double area = 2.0 * std::atan2(num, den);
    for (int k : f) grid.rule.weights[k] += area / 3.0;
  }
  return grid;
}

Quadrature build_zone_rule(const Vec3& axis, double psi0, double psi1, int level) {
  check_level(level);
  if (!(psi0 >= 0.0 && psi1 <= kPi && psi0 < psi1)) throw InvalidArgument("zone angles must satisfy 0 <= psi0 < psi1 <= pi");
  const int npsi = std::max(4, latitude_count(level));
  const int nphi = 2 * latitude_count(level);
  const TangentFrame fr = tangent_basis(axis.normalized());
  std::vector<double> x, w;
  gauss_legendre(npsi, x, w);

  Quadrature q;
  q.nodes.reserve(static_cast<std::size_t>(npsi) * nphi);
  q.weights.reserve(static_cast<std::size_t>(npsi) * nphi);
  const double half = 0.5 * (psi1 - psi0);
  for (int i = 0; i < npsi; ++i) {
    const double psi = psi0 + half * (x[i] + 1.0);
    const double wpsi = w[i] * half * std::sin(psi);
    for (int j = 0; j < nphi; ++j) {
      const double phi = 2.0 * kPi * (j + 0.5) / nphi;
      Vec3 u = std::cos(psi) * fr.base + std::sin(psi) * (std::cos(phi) * fr.e1 + std::sin(phi) * fr.e2);
      q.nodes.push_back(u.normalized());
      q.weights.push_back(wpsi * 2.0 * kPi / nphi);
    }
  }
  return q;
}

TangentFrame tangent_basis(const Vec3& u) {
  if (!is_unit(u, 1e-9)) throw InvalidArgument("tangent_basis: input must be a unit vector");
  TangentFrame fr;
  fr.base = u;
  const double rho = std::hypot(u.x(), u.y());
  if (rho < 1e-12) {
    const double sgn = u.z() > 0 ? 1.0 : -1.0;
    fr.e1 = Vec3(1, 0, 0);
    fr.e2 = Vec3(0, sgn, 0);
    fr.base = Vec3(0, 0, sgn);
    return fr;
  }
  const double cp = u.x() / rho, sp = u.y() / rho;
  fr.e1 = Vec3(u.z() * cp, u.z() * sp, -rho);
  fr.e2 = Vec3(-sp, cp, 0.0);
  // re-orthonormalize against u to absorb the 1e-9 slack in the input norm
  fr.base = u.normalized();
  fr.e1 = (fr.e1 - fr.e1.dot(fr.base) * fr.base).normalized();
  fr.e2 = fr.base.cross(fr.e1);
  return fr;
}

nlohmann::json grid_to_json(const Quadrature& rule) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Vec3& u = rule.nodes[i];
    arr.push_back({{"node", {u.x(), u.y(), u.z()}}, {"weight", rule.weights[i]}});
  }
  return arr;
}

CircleRule build_circle_rule(const Vec3& center, double spherical_radius, int level) {
  check_level(level);
  CircleRule c;
  c.center = center.normalized();
  c.radius = spherical_radius;
  const TangentFrame fr = tangent_basis(c.center);
  const int n = 16 << level;
  const double s = std::sin(spherical_radius);
  for (int j = 0; j < n; ++j) {
    const double phi = 2.0 * kPi * j / n;
    c.angles.push_back(phi);
    Vec3 u = std::cos(spherical_radius) * fr.base + s * (std::cos(phi) * fr.e1 + std::sin(phi) * fr.e2);
    c.nodes.push_back(u.normalized());
    c.weights.push_back(2.0 * kPi * s / n);
  }
  return c;
}

}  // namespace sphbm
