#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "sphbm/calculus.hpp"
#include "sphbm/random.hpp"
#include "sphbm/sawtooth.hpp"

using namespace sphbm;

namespace {

SymMatrix2 random_sym(Rng& rng) { return {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)}; }

Mat3 random_sym3(Rng& rng) {
  Mat3 M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = rng.uniform(-1, 1);
  return 0.5 * (M + M.transpose());
}

// Q(f) in the frame, projected from a 3x3 ambient matrix.
SymMatrix2 project(const Mat3& q, const TangentFrame& fr) {
  return {fr.e1.dot(q * fr.e1), fr.e1.dot(q * fr.e2), fr.e2.dot(q * fr.e2)};
}

double max_abs_diff(const SymMatrix2& x, const SymMatrix2& y) {
  return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c)});
}

}  // namespace

TEST(SymMatrix2, CofactorAndContract) {
  const SymMatrix2 A{2.0, -1.0, 5.0};
  EXPECT_EQ(cofactor(A), (SymMatrix2{5.0, 1.0, 2.0}));
  EXPECT_DOUBLE_EQ(contract(A, SymMatrix2::identity()), 7.0);
  EXPECT_DOUBLE_EQ(contract(cofactor(A), A), 2.0 * A.det());
}

TEST(SymMatrix2, TraceDetIdentityProperty) {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(trace_det_identity_check(random_sym(rng)), 1e-14);
}

TEST(SymMatrix2, EigenDecomposition) {
  Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const SymMatrix2 A = random_sym(rng);
    const auto ev = A.eigenvalues();
    EXPECT_LE(ev[0], ev[1]);
    EXPECT_NEAR(ev[0] + ev[1], A.trace(), 1e-12);
    EXPECT_NEAR(ev[0] * ev[1], A.det(), 1e-12);
    for (double l : ev) {
      const Vec2 v = A.eigenvector(l);
      EXPECT_NEAR(v.norm(), 1.0, 1e-12);
      EXPECT_LT((A.apply(v) - l * v).norm(), 1e-10);
    }
    EXPECT_NEAR(A.spectral_norm(), std::max(std::abs(ev[0]), std::abs(ev[1])), 1e-14);
  }
}

TEST(Calculus, QOfQuadraticClosedForm) {
  // f = c + u^T M u has Q = 2 M_T + (c - u^T M u) I on the tangent plane.
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    const double c = rng.uniform(-1, 2);
    const Mat3 M = random_sym3(rng);
    const SphericalFunction f = quadratic(c, M);
    const Vec3 u = rng.unit_vector();
    const TangentFrame fr = tangent_basis(u);
    const SymMatrix2 expect = project(2.0 * M, fr) + SymMatrix2::identity() * (c - u.dot(M * u));
    EXPECT_LT(max_abs_diff(q_matrix(f, u).q, expect), 1e-8);
  }
}

TEST(Calculus, EllipsoidHessianMatchesSymbolic) {
  Rng rng(14);
  const Mat3 A = Vec3(1.0, 2.0, 4.0).asDiagonal();
  const SphericalFunction f = ellipsoid(A);
  for (int i = 0; i < 50; ++i) {
    const Vec3 u = rng.unit_vector();
    const Mat3 D = homogeneous_hessian(f, u, 1e-3);
    EXPECT_LT((D - oracle::ellipsoid_hessian(A, u)).norm(), 1e-7);
    const SymMatrix2 q = q_matrix(f, u).q;
    EXPECT_LT(max_abs_diff(q, project(oracle::ellipsoid_hessian(A, u), tangent_basis(u))), 1e-7);
  }
}

TEST(Calculus, ConstantAndLinear) {
  Rng rng(15);
  for (int i = 0; i < 20; ++i) {
    const Vec3 u = rng.unit_vector();
    EXPECT_LT(max_abs_diff(q_matrix(constant(2.5), u).q, SymMatrix2::identity() * 2.5), 1e-8);
    EXPECT_LT(q_matrix(linear(rng.unit_vector() * 3.0), u).q.frobenius(), 1e-8);
  }
}

TEST(Calculus, EigenvalueLemmaProperty) {
  // spec(D^2 H) = spec(Q) with an extra 0 in the radial direction.
  Rng rng(16);
  const std::vector<std::string> names = {"ellipsoid", "shifted_ellipsoid", "quad", "exp_bump", "zonal_quartic"};
  for (int i = 0; i < 100; ++i) {
    const SphericalFunction f = builtin(names[rng.index(static_cast<int>(names.size()))]);
    const Vec3 u = rng.unit_vector();
    const Mat3 D = homogeneous_hessian(f, u, 1e-3);
    EXPECT_LT((D * u).norm(), 1e-7 * (1.0 + D.norm()));
    Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (D + D.transpose()));
    std::array<double, 3> a = {es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]};
    const auto q = q_matrix(f, u).eigenvalues;
    std::array<double, 3> b = {q[0], q[1], 0.0};
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-6 * (1.0 + D.norm()));
  }
}

TEST(Calculus, RotationEquivariance) {
  Rng rng(17);
  const SphericalFunction f = builtin("shifted_ellipsoid");
  for (int i = 0; i < 20; ++i) {
    const Mat3 rho = rng.rotation();
    const SphericalFunction g = rotate_function(f, rho);
    const Vec3 x = rng.unit_vector();
    const QSample a = q_matrix(g, x), b = q_matrix(f, rho.transpose() * x);
    EXPECT_NEAR(a.q.det(), b.q.det(), 1e-7);
    EXPECT_NEAR(a.q.trace(), b.q.trace(), 1e-7);
  }
}

TEST(Calculus, JetAgreesWithFiniteDifferences) {
  SawtoothParams p;
  p.center = Vec3(1, 1, 1).normalized();
  p.direction = Vec3(1, -1, 0);
  p.r = 0.2;
  p.eps = 0.05;
  p.smoothing = p.eps / 8.0;
  const SphericalFunction f = sawtooth_function(p);
  ASSERT_TRUE(static_cast<bool>(f.jet()));
  Rng rng(18);
  FdOptions fd;
  fd.use_jet = false;
  // Fine step: the smoothed kinks make the default step too coarse for a sharp comparison.
  fd.step = 2e-5;
  int checked = 0;
  for (int i = 0; i < 400 && checked < 40; ++i) {
    const Vec3 u = (p.center + 0.15 * rng.unit_vector()).normalized();
    if (std::abs(f(u)) < 1e-6) continue;
    ++checked;
    const QSample a = q_matrix(f, u), b = q_matrix(f, u, fd);
    EXPECT_LT(max_abs_diff(a.q, b.q), 1e-5 * (1.0 + a.q.frobenius())) << "at " << u.transpose();
  }
  EXPECT_GT(checked, 10);
}

TEST(Calculus, LocalJetGradient) {
  const Vec3 a(0.3, -0.7, 0.2);
  const SphericalFunction f = linear(a);
  Rng rng(19);
  for (int i = 0; i < 20; ++i) {
    const Vec3 u = rng.unit_vector();
    const TangentFrame fr = tangent_basis(u);
    const LocalJet j = local_jet(f, fr);
    EXPECT_NEAR(j.value, a.dot(u), 1e-14);
    EXPECT_NEAR(j.grad.x(), a.dot(fr.e1), 1e-9);
    EXPECT_NEAR(j.grad.y(), a.dot(fr.e2), 1e-9);
  }
}

TEST(Calculus, StepValidation) {
  EXPECT_THROW(homogeneous_hessian(constant(1), Vec3::UnitZ(), 0.0), InvalidArgument);
  EXPECT_THROW(homogeneous_hessian(constant(1), Vec3::UnitZ(), 0.5), InvalidArgument);
}

TEST(Calculus, FourthOrderBeatsSecondOrder) {
  const SphericalFunction f = builtin("exp_bump");
  const Vec3 u = Vec3(0.2, 0.4, 0.8).normalized();
  const Mat3 ref = homogeneous_hessian(f, u, 2e-3, FdOrder::fourth);
  const double e2 = (homogeneous_hessian(f, u, 1e-2, FdOrder::second) - ref).norm();
  const double e4 = (homogeneous_hessian(f, u, 1e-2, FdOrder::fourth) - ref).norm();
  EXPECT_LT(e4, e2);
}

TEST(Calculus, JetFieldSerialParallelEqual) {
  const SphereGrid g = build_grid(3);
  const SphericalFunction f = builtin("zonal_quartic");
  const auto a = jet_field(f, g.rule, {}, Exec::serial);
  const auto b = jet_field(f, g.rule, {}, Exec::parallel);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].q, b[i].q);
    EXPECT_EQ(a[i].value, b[i].value);
  }
}
