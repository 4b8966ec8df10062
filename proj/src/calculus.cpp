#include "sphbm/calculus.hpp"

#include <cmath>

namespace sphbm {

double SymMatrix2::spectral_norm() const {
  const auto ev = eigenvalues();
  return std::max(std::abs(ev[0]), std::abs(ev[1]));
}

std::array<double, 2> SymMatrix2::eigenvalues() const {
  const double m = 0.5 * (a + c);
  const double r = std::hypot(0.5 * (a - c), b);
  return {m - r, m + r};
}

Vec2 SymMatrix2::eigenvector(double lambda) const {
  const Vec2 v1(b, lambda - a);
  const Vec2 v2(lambda - c, b);
  const Vec2 v = v1.squaredNorm() >= v2.squaredNorm() ? v1 : v2;
  if (v.norm() > 1e-300) return v.normalized();
  // scalar matrix: any vector works
  return Vec2::UnitX();
}

SymMatrix2 cofactor(const SymMatrix2& A) { return {A.c, -A.b, A.a}; }

double contract(const SymMatrix2& X, const SymMatrix2& Y) { return X.a * Y.a + 2.0 * X.b * Y.b + X.c * Y.c; }

double trace_det_identity_check(const SymMatrix2& A) { return std::abs(A.det() - 0.5 * contract(cofactor(A), A)); }

namespace {

// Second derivative of t -> H(u + t v) at 0.
double second_diff(const SphericalFunction& f, const Vec3& u, const Vec3& v, double h, FdOrder order) {
  const double f0 = f.homogeneous(u);
  const double p1 = f.homogeneous(u + h * v), m1 = f.homogeneous(u - h * v);
  if (order == FdOrder::second) return (p1 - 2.0 * f0 + m1) / (h * h);
  const double p2 = f.homogeneous(u + 2.0 * h * v), m2 = f.homogeneous(u - 2.0 * h * v);
  return (-p2 + 16.0 * p1 - 30.0 * f0 + 16.0 * m1 - m2) / (12.0 * h * h);
}

double first_diff(const SphericalFunction& f, const Vec3& u, const Vec3& v, double h, FdOrder order) {
  const double p1 = f.homogeneous(u + h * v), m1 = f.homogeneous(u - h * v);
  if (order == FdOrder::second) return (p1 - m1) / (2.0 * h);
  const double p2 = f.homogeneous(u + 2.0 * h * v), m2 = f.homogeneous(u - 2.0 * h * v);
  return (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
}

void check_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw NumericalFailure(std::string(what) + ": non-finite finite-difference value");
}

}  // namespace

double effective_step(const SphericalFunction& f, const FdOptions& opts) {
  if (!(opts.step > 0.0) || opts.step > 1e-2) throw InvalidArgument("finite-difference step must lie in (0, 1e-2]");
  return std::min(opts.step, f.feature_scale() / 50.0);
}

Mat3 homogeneous_hessian(const SphericalFunction& f, const Vec3& u, double step, FdOrder order) {
  if (!(step > 0.0) || step > 1e-2) throw InvalidArgument("homogeneous_hessian: step must lie in (0, 1e-2]");
  if (!is_unit(u, 1e-9)) throw InvalidArgument("homogeneous_hessian: u must be a unit vector");
  Mat3 Hm;
  const Mat3 I = Mat3::Identity();
  for (int k = 0; k < 3; ++k) Hm(k, k) = second_diff(f, u, I.col(k), step, order);
  for (int k = 0; k < 3; ++k) {
    for (int l = k + 1; l < 3; ++l) {
      const double dp = second_diff(f, u, I.col(k) + I.col(l), step, order);
      const double dm = second_diff(f, u, I.col(k) - I.col(l), step, order);
      Hm(k, l) = Hm(l, k) = 0.25 * (dp - dm);
    }
  }
  for (int k = 0; k < 9; ++k) check_finite(Hm.data()[k], "homogeneous_hessian");
  return Hm;
}

TangentFrame node_frame(const Vec3& u) { return tangent_basis(u.normalized()); }

LocalJet local_jet(const SphericalFunction& f, const TangentFrame& fr, const FdOptions& opts) {
  LocalJet j;
  const Vec3& u = fr.base;
  if (opts.use_jet && f.jet()) {
    const AmbientJet aj = f.jet()(u);
    j.value = aj.value;
    j.grad = {aj.grad.dot(fr.e1), aj.grad.dot(fr.e2)};
    j.q = {fr.e1.dot(aj.q * fr.e1), fr.e1.dot(aj.q * fr.e2), fr.e2.dot(aj.q * fr.e2)};
    return j;
  }
  const double h = effective_step(f, opts);
  j.value = f(u);
  // the radial component of grad H is f(u); tangential components are the sphere gradient
  j.grad = {first_diff(f, u, fr.e1, h, opts.order), first_diff(f, u, fr.e2, h, opts.order)};
  const double d11 = second_diff(f, u, fr.e1, h, opts.order);
  const double d22 = second_diff(f, u, fr.e2, h, opts.order);
  const double dp = second_diff(f, u, fr.e1 + fr.e2, h, opts.order);
  const double dm = second_diff(f, u, fr.e1 - fr.e2, h, opts.order);
  j.q = {d11, 0.25 * (dp - dm), d22};
  check_finite(j.value, "local_jet");
  check_finite(j.q.a + j.q.b + j.q.c + j.grad.sum(), "local_jet");
  return j;
}

QSample q_matrix(const SphericalFunction& f, const Vec3& u, const TangentFrame& frame, const FdOptions& opts) {
  if (!is_unit(u, 1e-9)) throw InvalidArgument("q_matrix: u must be a unit vector");
  if ((frame.base - u).norm() > 1e-9) throw InvalidArgument("q_matrix: frame base does not match u");
  QSample s;
  s.point = u;
  s.frame = frame;
  s.q = local_jet(f, frame, opts).q;
  s.eigenvalues = s.q.eigenvalues();
  s.min_eigvec = s.q.eigenvector(s.eigenvalues[0]);
  return s;
}

QSample q_matrix(const SphericalFunction& f, const Vec3& u, const FdOptions& opts) {
  return q_matrix(f, u, tangent_basis(u), opts);
}

std::vector<LocalJet> jet_field(const SphericalFunction& f, const Quadrature& rule, const FdOptions& opts, Exec exec) {
  std::vector<LocalJet> out(rule.size());
  for_each_index(
      rule.size(), [&](std::size_t i) { out[i] = local_jet(f, node_frame(rule.nodes[i]), opts); }, exec);
  return out;
}

}  // namespace sphbm
