#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sphbm/kernels.hpp"
#include "sphbm/random.hpp"
#include "sphbm/sphere_grid.hpp"
#include "sphbm/spherical_function.hpp"

using namespace sphbm;

namespace {

double integrate_monomial(const SphereGrid& g, int a, int b, int c) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3& u = g.rule.nodes[i];
    s += g.rule.weights[i] * std::pow(u.x(), a) * std::pow(u.y(), b) * std::pow(u.z(), c);
  }
  return s;
}

}  // namespace

TEST(SphereGrid, InvariantsEveryLevel) {
  std::size_t prev = 0;
  for (int level = 0; level <= 6; ++level) {
    const SphereGrid g = build_grid(level);
    EXPECT_GT(g.size(), prev);
    prev = g.size();
    double wsum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_LT(std::abs(g.rule.nodes[i].norm() - 1.0), 1e-12);
      EXPECT_GT(g.rule.weights[i], 0.0);
      wsum += g.rule.weights[i];
    }
    EXPECT_NEAR(wsum, 4.0 * M_PI, 1e-10) << "level " << level;
  }
}

TEST(SphereGrid, LevelZeroBaseCount) {
  EXPECT_EQ(build_grid(0).size(), 8u);
  EXPECT_EQ(build_grid(1).size(), 32u);
}

TEST(SphereGrid, MonomialExactnessUpToDeclaredDegree) {
  for (int level = 1; level <= 4; ++level) {
    const SphereGrid g = build_grid(level);
    const int deg = g.exactness_degree();
    ASSERT_GT(deg, 0);
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b)
        for (int c = 0; a + b + c <= deg; c += 1)
          ASSERT_NEAR(integrate_monomial(g, a, b, c), oracle::monomial_integral(a, b, c), 1e-9)
              << "level " << level << " x^" << a << " y^" << b << " z^" << c;
  }
}

TEST(SphereGrid, RefinementShrinksErrorOnSmoothIntegrand) {
  // degree 4 is exact from level 1 on, so use a non-polynomial integrand as well.
  const double exact4 = 4.0 * M_PI / 15.0;
  EXPECT_NEAR(integrate_monomial(build_grid(2), 2, 2, 0), exact4, 1e-12);
  EXPECT_NEAR(integrate_monomial(build_grid(3), 2, 2, 0), exact4, 1e-12);
  auto err = [](int level) {
    const SphereGrid g = build_grid(level);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.rule.weights[i] * std::exp(2.0 * g.rule.nodes[i].x());
    return std::abs(s - 2.0 * M_PI * std::sinh(2.0));
  };
  double prev = err(2);
  for (int level = 3; level <= 5; ++level) {
    const double e = err(level);
    EXPECT_LE(e, prev);
    prev = e;
  }
  EXPECT_LT(err(4), 1e-12);
}

TEST(SphereGrid, IntegrateSphereExamples) {
  const SphereGrid g = build_grid(3);
  EXPECT_NEAR(integrate_sphere(constant(1.0), g), 4.0 * M_PI, 1e-10);
  EXPECT_NEAR(integrate_sphere(linear(Vec3(0.3, -1.2, 2.0)), g), 0.0, 1e-9);
  const Vec3 e = Vec3(1, 2, -2).normalized();
  const SphericalFunction sq([e](const Vec3& u) { return std::pow(e.dot(u), 2); }, Smoothness::Cinf, "sq");
  EXPECT_NEAR(integrate_sphere(sq, g), 4.0 * M_PI / 3.0, 1e-12);
}

TEST(SphereGrid, IcosphereWeights) {
  for (int level = 0; level <= 4; ++level) {
    const SphereGrid g = build_icosphere(level);
    EXPECT_EQ(g.size(), static_cast<std::size_t>(10 * (1 << (2 * level)) + 2));
    EXPECT_NEAR(g.rule.total_weight(), 4.0 * M_PI, 1e-10);
    for (const auto& u : g.rule.nodes) EXPECT_LT(std::abs(u.norm() - 1.0), 1e-12);
  }
}

TEST(SphereGrid, ZoneRuleIntegratesArea) {
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const Vec3 axis = rng.unit_vector();
    const double a = rng.uniform(0.0, 1.5), b = a + rng.uniform(0.1, 1.5);
    const Quadrature q = build_zone_rule(axis, a, b, 3);
    EXPECT_NEAR(q.total_weight(), 2.0 * M_PI * (std::cos(a) - std::cos(b)), 1e-11);
    for (const auto& u : q.nodes) {
      const double ang = std::acos(std::clamp(u.dot(axis), -1.0, 1.0));
      EXPECT_GE(ang, a - 1e-12);
      EXPECT_LE(ang, b + 1e-12);
    }
  }
}

TEST(SphereGrid, CircleRuleLength) {
  const CircleRule c = build_circle_rule(Vec3(0, 1, 0), 0.7, 2);
  double len = 0.0;
  for (double w : c.weights) len += w;
  EXPECT_NEAR(len, 2.0 * M_PI * std::sin(0.7), 1e-12);
  for (const auto& u : c.nodes) EXPECT_NEAR(std::acos(u.dot(c.center)), 0.7, 1e-12);
}

TEST(TangentBasis, Poles) {
  for (const Vec3& u : {Vec3(0, 0, 1), Vec3(0, 0, -1), Vec3(1, 0, 0)}) {
    const TangentFrame f = tangent_basis(u);
    EXPECT_NEAR(f.e1.dot(u), 0.0, 1e-12);
    EXPECT_NEAR(f.e2.dot(u), 0.0, 1e-12);
    EXPECT_NEAR(f.e1.dot(f.e2), 0.0, 1e-12);
    EXPECT_NEAR(f.e1.norm(), 1.0, 1e-12);
    EXPECT_NEAR(f.e2.norm(), 1.0, 1e-12);
    EXPECT_NEAR(f.e1.cross(f.e2).dot(u), 1.0, 1e-12);
  }
}

TEST(TangentBasis, RandomRightHanded) {
  Rng rng(1000);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 u = rng.unit_vector();
    const TangentFrame f = tangent_basis(u);
    Mat3 m;
    m.col(0) = f.e1;
    m.col(1) = f.e2;
    m.col(2) = u;
    EXPECT_NEAR(m.determinant(), 1.0, 1e-9);
    EXPECT_LT((m.transpose() * m - Mat3::Identity()).norm(), 1e-12);
  }
}

TEST(TangentBasis, ContinuousAwayFromPoles) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    Vec3 u = rng.unit_vector();
    if (std::abs(u.z()) > 0.99) continue;
    const Vec3 v = (u + 1e-7 * rng.unit_vector()).normalized();
    EXPECT_LT((tangent_basis(u).e1 - tangent_basis(v).e1).norm(), 1e-5);
    EXPECT_LT((tangent_basis(u).e2 - tangent_basis(v).e2).norm(), 1e-5);
  }
}

TEST(TangentBasis, RejectsNonUnit) { EXPECT_THROW(tangent_basis(Vec3(0, 0, 2)), InvalidArgument); }

TEST(SphereGrid, JsonShape) {
  const SphereGrid g = build_grid(1);
  const auto j = grid_to_json(g.rule);
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), g.size());
  EXPECT_EQ(j[0]["node"].size(), 3u);
  EXPECT_DOUBLE_EQ(j[0]["weight"].get<double>(), g.rule.weights[0]);
}

TEST(Kernels, SerialAndParallelBitwiseEqual) {
  const SphereGrid g = build_grid(5);
  const SphericalFunction f = builtin("exp_bump");
  auto fn = [&](const Vec3& u) { return f(u); };
  const auto a = map_nodes(g.rule.nodes, fn, Exec::serial);
  const auto b = map_nodes(g.rule.nodes, fn, Exec::parallel);
  ASSERT_EQ(a, b);
  EXPECT_EQ(weighted_sum(g.rule.weights, a), weighted_sum(g.rule.weights, b));
  set_default_exec(Exec::serial);
  const double s = integrate_sphere(f, g);
  set_default_exec(Exec::parallel);
  EXPECT_EQ(s, integrate_sphere(f, g));
}
