#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sphbm/area_measure.hpp"
#include "sphbm/random.hpp"

using namespace sphbm;

namespace {

double cone_mass(double theta) { return 2.0 * M_PI * (1.0 - std::cos(theta)) + M_PI * std::sin(theta); }

SphericalFunction random_smooth_support(Rng& rng) {
  Mat3 R = rng.rotation();
  const Vec3 axes(rng.uniform(0.7, 1.5), rng.uniform(0.7, 1.5), rng.uniform(0.7, 1.5));
  const Mat3 A = R * Mat3(axes.cwiseProduct(axes).asDiagonal()) * R.transpose();
  return sum({{1.0, ellipsoid(A)}, {rng.uniform(0.1, 0.5), constant(1.0)}, {1.0, linear(rng.unit_vector() * 0.3)}});
}

}  // namespace

TEST(AreaMeasure, ConeMassClosedForm) {
  const SphereGrid g = build_grid(3);
  for (double theta : {M_PI / 12, M_PI / 6, M_PI / 4, M_PI / 3}) {
    const AreaMeasure m = area_measure(cone(Vec3(0, 0, 1), theta), g);
    EXPECT_NEAR(m.total_mass(), cone_mass(theta), 1e-9);
    EXPECT_NEAR(m.total_mass(), oracle::cone_mesh_area(theta, 200), 1e-3);
  }
}

TEST(AreaMeasure, ConeVolumeFromSupportIntegral) {
  const SphereGrid g = build_grid(4);
  Rng rng(51);
  for (double theta : {M_PI / 6, M_PI / 3}) {
    const Vec3 P = rng.unit_vector();
    const AreaMeasure m = area_measure(cone(P, theta), g);
    EXPECT_NEAR(m.integrate(cone_support(P, theta)) / 3.0, oracle::cone_volume(theta), 1e-6);
  }
}

TEST(AreaMeasure, BallAndEllipsoid) {
  const SphereGrid g = build_grid(4);
  EXPECT_NEAR(area_measure(ball(1.5), g).total_mass(), 4.0 * M_PI * 2.25, 1e-10);
  const AreaMeasure e = area_measure(smooth_body(ellipsoid_axes(Vec3(1.0, 1.2, 1.5))), g);
  EXPECT_NEAR(e.total_mass(), oracle::ellipsoid_mesh_area(1.0, 1.2, 1.5, 200), 1e-4);
  EXPECT_NEAR(e.integrate(ellipsoid_axes(Vec3(1.0, 1.2, 1.5))) / 3.0, oracle::ellipsoid_volume(1.0, 1.2, 1.5), 1e-6);
}

TEST(AreaMeasure, CylinderMass) {
  const SphereGrid g = build_grid(3);
  const PlanarBody base = planar_ellipse(1.0, 0.6, 0.3);
  const AreaMeasure m = area_measure(cylinder(base, 1.7, Vec3(1, 1, 0).normalized()), g);
  EXPECT_NEAR(m.total_mass(), 2.0 * planar_area(base) + 1.7 * planar_perimeter(base), 1e-9);
  EXPECT_EQ(m.atoms.size(), 2u);
}

TEST(AreaMeasure, ConeBallSteiner) {
  // S(aC + eta B) = a^2 S(C) + 2 a eta M(C) + 4 pi eta^2, with 2 M(C) = int h_C dS_1 measured through F.
  const double theta = 0.6, a = 1.3, eta = 0.25;
  const AreaMeasure m = cone_ball_measure(Vec3::UnitZ(), theta, a, eta, 4);
  const AreaMeasure c = cone_ball_measure(Vec3::UnitZ(), theta, a, 0.0, 4);
  const AreaMeasure b = area_measure(ball(eta), build_grid(4));
  EXPECT_NEAR(c.total_mass(), a * a * cone_mass(theta), 1e-9);
  EXPECT_NEAR(b.total_mass(), 4.0 * M_PI * eta * eta, 1e-9);
  // mixed term: perimeter-like quantity of C times 2 a eta; quadratic in (a, eta), so three samples fix it.
  const AreaMeasure m2 = cone_ball_measure(Vec3::UnitZ(), theta, a, 2.0 * eta, 4);
  const double mixed1 = m.total_mass() - c.total_mass() - b.total_mass();
  const double mixed2 = m2.total_mass() - c.total_mass() - 4.0 * b.total_mass();
  EXPECT_NEAR(mixed2, 2.0 * mixed1, 1e-9);
}

TEST(AreaMeasure, CentroidVanishes) {
  const SphereGrid g = build_grid(4);
  Rng rng(52);
  std::vector<ConvexBody> bodies = {ball(), smooth_body(builtin("ellipsoid")), cone(rng.unit_vector(), 0.7),
                                    cylinder(planar_ellipse(1.0, 0.5, 0.2), 1.3, rng.unit_vector())};
  for (int i = 0; i < 3; ++i) bodies.push_back(smooth_body(random_smooth_support(rng)));
  for (const auto& K : bodies) EXPECT_LT(area_measure(K, g).centroid().norm(), 1e-6) << K.kind();
}

TEST(AreaMeasure, RejectsNonSupportSmoothBody) {
  EXPECT_THROW(area_measure(smooth_body(builtin("saddle")), build_grid(3)), NotSupportFunction);
}
