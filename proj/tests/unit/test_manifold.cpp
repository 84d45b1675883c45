#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "yamabe/errors.hpp"
#include "yamabe/manifold.hpp"

using namespace yamabe;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(ProductManifold, ThreeDimensionalUnitCircle) {
  const Manifold m = make_product_manifold(3, 1.0);
  EXPECT_DOUBLE_EQ(m.scalar_curvature, 2.0);
  EXPECT_DOUBLE_EQ(m.conformal_constant, 8.0);
  EXPECT_DOUBLE_EQ(m.critical_exponent, 6.0);
  EXPECT_NEAR(m.volume, 8 * kPi * kPi, 1e-12);
  EXPECT_NEAR(m.volume, oracle::integrate(m, [](double) { return 1.0; }), 1e-10);
  EXPECT_DOUBLE_EQ(m.critical_length(), 1.0);
}

TEST(ProductManifold, FourDimensionalHalfCircle) {
  const Manifold m = make_product_manifold(4, 0.5);
  EXPECT_DOUBLE_EQ(m.scalar_curvature, 6.0);
  EXPECT_DOUBLE_EQ(m.conformal_constant, 6.0);
  EXPECT_DOUBLE_EQ(m.critical_exponent, 4.0);
  EXPECT_NEAR(m.volume, 2 * kPi * kPi * kPi, 1e-12);
  EXPECT_NEAR(m.critical_length(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(ProductManifold, RejectsBadInput) {
  EXPECT_THROW(make_product_manifold(2, 1.0), DomainError);
  EXPECT_THROW(make_product_manifold(3, 0.0), DomainError);
  EXPECT_THROW(make_product_manifold(3, -1.0), DomainError);
}

TEST(ProductManifold, SphereVolumes) {
  EXPECT_NEAR(unit_sphere_volume(1), 2 * kPi, 1e-14);
  EXPECT_NEAR(unit_sphere_volume(2), 4 * kPi, 1e-14);
  EXPECT_NEAR(unit_sphere_volume(3), 2 * kPi * kPi, 1e-13);
}

TEST(ProductManifold, ZeroModeIdentity) {
  for (int n = 3; n <= 8; ++n) {
    const Manifold m = make_product_manifold(n, 1.0);
    const double mu = (m.critical_exponent - 2.0) * m.scalar_curvature / m.conformal_constant;
    EXPECT_NEAR(mu, n - 2.0, 1e-12);
    const double ls = m.critical_length();
    EXPECT_NEAR(1.0 / (ls * ls), mu, 1e-12);
  }
}

TEST(ConformalScalarCurvature, IdentityAndConstants) {
  const Manifold m = make_product_manifold(3, 1.0);
  const auto g = m.make_grid(64);
  const Field r1 = conformal_scalar_curvature(m, Field::constant(g, 1.0));
  EXPECT_LT((r1.values().array() - 2.0).abs().maxCoeff(), 1e-15);
  const double c = 1.7;
  const Field rc = conformal_scalar_curvature(m, Field::constant(g, c));
  const double expected = std::pow(c, -4.0) * 2.0;
  EXPECT_LT((rc.values().array() - expected).abs().maxCoeff(), 1e-14);
}

TEST(ConformalScalarCurvature, MatchesFiniteDifferenceOracle) {
  const Manifold m = make_product_manifold(3, 1.0);
  const auto g = m.make_grid(128);
  const oracle::Fn u = [](double t) { return 1.0 + 0.1 * std::cos(t); };
  const Field r = conformal_scalar_curvature(m, Field::from_function(g, u));
  for (int j = 0; j < g->size(); ++j) {
    const double ref = oracle::scalar_curvature(m, u, g->angle(j));
    EXPECT_NEAR(r[j], ref, 1e-8 * std::abs(ref));
  }
}

TEST(ConformalScalarCurvature, NonpositiveFactorNamesNode) {
  const Manifold m = make_product_manifold(3, 1.0);
  const auto g = m.make_grid(16);
  const Field u = Field::from_function(g, [](double t) { return 0.5 + std::cos(t); });
  try {
    conformal_scalar_curvature(m, u);
    FAIL() << "expected a domain error";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("node 6 "), std::string::npos) << e.what();
  }
}

TEST(ConformalScalarCurvature, CommutesWithRotation) {
  const Manifold m = make_product_manifold(3, 1.3);
  const auto g = m.make_grid(64);
  const Field u = Field::from_function(g, [](double t) { return 1.0 + 0.2 * std::cos(t) + 0.05 * std::sin(3 * t); });
  const Field a = conformal_scalar_curvature(m, rotate(u, 0.7));
  const Field b = rotate(conformal_scalar_curvature(m, u), 0.7);
  EXPECT_LT((a.values() - b.values()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ConformalRepresentative, TransformationLaw) {
  // L_h f = psi^{1-2*} L_g(psi f) for h = psi^{4/(n-2)} g.
  for (int n : {3, 4, 5}) {
    const Manifold m = make_product_manifold(n, 0.9);
    const auto g = m.make_grid(128);
    const Field psi = Field::from_function(g, [](double t) { return 1.0 + 0.3 * std::cos(t - 0.2) + 0.1 * std::sin(2 * t); });
    const Field f = Field::from_function(g, [](double t) { return std::sin(t) + 0.4 * std::cos(3 * t) + 0.2; });
    const ConformalRepresentative h(m, psi);
    const Field lhs = h.conformal_laplacian(f);
    const Field rhs = psi.pow(1.0 - m.critical_exponent) * conformal_laplacian(m, psi * f);
    EXPECT_LT((lhs.values() - rhs.values()).cwiseAbs().maxCoeff(), 1e-9 * rhs.values().cwiseAbs().maxCoeff());
  }
}

TEST(ConformalRepresentative, VolumeAndScalarCurvature) {
  const Manifold m = make_product_manifold(3, 1.0);
  const auto g = m.make_grid(64);
  const Field psi = Field::constant(g, 2.0);
  const ConformalRepresentative h(m, psi);
  EXPECT_NEAR(h.volume(), std::pow(2.0, 6.0) * m.volume, 1e-9);
  EXPECT_NEAR(h.scalar_curvature()[0], 2.0 / 16.0, 1e-14);
}
