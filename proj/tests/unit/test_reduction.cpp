#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "yamabe/energy.hpp"
#include "yamabe/errors.hpp"
#include "yamabe/hessian.hpp"
#include "yamabe/reduction.hpp"

using namespace yamabe;

namespace {

struct Degenerate {
  Manifold man = make_product_manifold(3, 1.0);
  Field v = normalize_volume(man, Field::constant(man.make_grid(128), 1.0));
  std::vector<Field> kernel = hessian_spectrum(man, v).kernel_basis();
  GraphMap map{man, v, kernel};
};

const Degenerate& degenerate() {
  static const Degenerate d;
  return d;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd x(2);
  x << a, b;
  return x;
}

}  // namespace

TEST(GraphMap, VanishesAtOrigin) {
  const auto& d = degenerate();
  ASSERT_EQ(d.map.dimension(), 2);
  const Lift lift = d.map.solve(Eigen::VectorXd::Zero(2));
  EXPECT_LT(lift.correction.values().cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(d.map.reduced_energy(Eigen::VectorXd::Zero(2)), yamabe_energy(d.man, d.v), 1e-12 * yamabe_energy(d.man, d.v));
}

TEST(GraphMap, DerivativeVanishesAtOrigin) {
  const auto& d = degenerate();
  const double h = 1e-4;
  for (int i = 0; i < 2; ++i) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
    x[i] = h;
    const Field plus = d.map.solve(x).correction;
    const Field minus = d.map.solve(-x).correction;
    EXPECT_LT(w12_norm((plus - minus) / (2 * h)), 1e-6);
  }
}

TEST(GraphMap, ConvergesAndSatisfiesConstraints) {
  const auto& d = degenerate();
  for (double angle : {0.0, 1.0, 2.5}) {
    const Eigen::VectorXd x = vec2(0.05 * std::cos(angle), 0.05 * std::sin(angle));
    const Lift lift = d.map.solve(x);
    EXPECT_LT(lift.residual, 1e-10);
    EXPECT_LE(lift.iterations, 10);
    EXPECT_NEAR(volume_integral(d.man, lift.point), 1.0, 1e-10);
    EXPECT_LT(d.map.projected_residual(lift.point), 1e-10);
    for (const Field& e : d.map.kernel()) EXPECT_LT(std::abs(l2_inner(lift.correction, e)), 1e-10);
    EXPECT_LT((d.map.coordinates(lift.point) - x).norm(), 1e-10);
  }
}

TEST(GraphMap, RejectsPointsOutsideTrustRadius) {
  const auto& d = degenerate();
  EXPECT_THROW(d.map.solve(vec2(0.2, 0.0)), DomainError);
  EXPECT_THROW(d.map.solve(Eigen::VectorXd::Zero(3)), DomainError);
}

TEST(ReducedEnergy, RotationInvariant) {
  const auto& d = degenerate();
  const double q = d.map.reduced_energy(vec2(0.05, 0.0));
  for (double angle : {0.7, 2.0, 4.0}) {
    EXPECT_NEAR(d.map.reduced_energy(vec2(0.05 * std::cos(angle), 0.05 * std::sin(angle))), q, 1e-10 * q);
  }
}

TEST(ReducedEnergy, GradientMatchesFiniteDifference) {
  const auto& d = degenerate();
  const Eigen::VectorXd x = vec2(0.03, -0.02);
  const Eigen::VectorXd g = d.map.reduced_gradient(x);
  for (int i = 0; i < 2; ++i) {
    const auto along = [&](double h) {
      Eigen::VectorXd y = x;
      y[i] += h;
      return d.map.reduced_energy(y);
    };
    EXPECT_NEAR(oracle::five_point1(along, 0.0, 1e-3), g[i], 1e-7 * g.norm());
  }
}

TEST(TaylorOfQ, NondegenerateBase) {
  const Manifold m = make_product_manifold(3, 0.8);
  const Field v = normalize_volume(m, Field::constant(m.make_grid(64), 1.0));
  const ReducedModel model = taylor_of_q(m, v, {});
  EXPECT_TRUE(model.nondegenerate);
  EXPECT_EQ(classify_integrability(model, 1e-6), Integrability::nondegenerate);
  EXPECT_EQ(to_string(Integrability::nondegenerate), "nondegenerate");
}

TEST(TaylorOfQ, QuarticOrderAtCriticalLength) {
  const auto& d = degenerate();
  const ReducedModel model = taylor_of_q(d.man, d.v, d.kernel);
  EXPECT_FALSE(model.nondegenerate);
  EXPECT_NEAR(model.q0, yamabe_energy(d.man, d.v), 1e-12 * model.q0);
  ASSERT_NE(model.degree(2), nullptr);
  EXPECT_LT(model.degree(2)->norm, 1e-7);
  EXPECT_LT(model.degree(3)->norm, 1e-7);
  EXPECT_GT(model.degree(4)->norm, 1e-3);
  ASSERT_TRUE(model.p_min.has_value());
  EXPECT_EQ(*model.p_min, 4);
  EXPECT_EQ(*model.p_max, 4);
  EXPECT_TRUE(model.asp_holds());
  EXPECT_NEAR(model.asp_maximizer().norm(), 1.0, 1e-12);
  EXPECT_EQ(classify_integrability(model, 1e-6), Integrability::nonintegrable);
  EXPECT_LE(model.condition_number, 1e10);
  EXPECT_GE(model.sample_count, 3 * 25);

  // Ray scaling: q(tx) - q0 - t^4 q_4(x) = O(t^5) or better.
  const Polynomial q4 = model.polynomial.homogeneous_part(4);
  const Eigen::VectorXd dir = vec2(std::cos(0.3), std::sin(0.3));
  std::vector<double> ts{0.02, 0.04, 0.08}, rem;
  for (double t : ts) rem.push_back(std::abs(d.map.reduced_energy(t * dir) - model.q0 - q4(t * dir)));
  const double slope = std::log(rem[2] / rem[0]) / std::log(ts[2] / ts[0]);
  EXPECT_GT(slope, 4.5);
}

TEST(CheckAsp, SyntheticQuartics) {
  const AspResult pos = check_asp(Polynomial::radial(2, 2, 1.5), 4, 1e-9);
  EXPECT_TRUE(pos.holds);
  EXPECT_NEAR(pos.maximum, 1.5, 1e-9);
  const AspResult neg = check_asp(Polynomial::radial(3, 2, -1.0), 4, 1e-9);
  EXPECT_FALSE(neg.holds);

  Polynomial mixed(2);
  mixed.add({4, 0}, -1.0);
  mixed.add({0, 4}, 0.5);
  const AspResult m = check_asp(mixed, 4, 1e-9);
  EXPECT_TRUE(m.holds);
  EXPECT_NEAR(m.maximum, 0.5, 1e-8);
  EXPECT_NEAR(std::abs(m.maximizer[1]), 1.0, 1e-6);

  Polynomial odd(1);
  odd.add({3}, 2.0);
  const AspResult o = check_asp(odd, 3, 1e-9);
  EXPECT_TRUE(o.holds);
  EXPECT_DOUBLE_EQ(o.maximizer[0], 1.0);
}

TEST(Classify, IntegrableWhenAllDegreesVanish) {
  const auto& d = degenerate();
  ReducedModel model{.base = d.v, .kernel = d.kernel};
  for (int j = 2; j <= 6; ++j) model.degrees.push_back(DegreeFit{.degree = j, .norm = 1e-12});
  EXPECT_EQ(classify_integrability(model, 1e-6), Integrability::integrable);
  model.degrees[2].norm = 1.0;
  EXPECT_EQ(classify_integrability(model, 1e-6), Integrability::nonintegrable);
}
