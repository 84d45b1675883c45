#pragma once

// Deficit-versus-distance experiments near critical points.

#include <Eigen/Core>

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "yamabe/manifold.hpp"
#include "yamabe/polynomial.hpp"
#include "yamabe/reduction.hpp"

namespace yamabe {

struct Sample {
  std::string label;
  double radius = 0.0;
  double distance = 0.0;
  double deficit = 0.0;
};

// A one-parameter family of points of B with path(0) at a critical point.
struct Direction {
  std::string label;
  std::function<Field(double)> path;
};

// t -> normalize_volume(v + t phi / |phi|_{W12}).
Direction linear_direction(const Manifold& man, const Field& v, const Field& phi, std::string label);
// t -> v + t x.e + F(t x.e), x normalised.
Direction lift_direction(const GraphMap& map, const Eigen::VectorXd& x, std::string label);

// Random combinations of cos/sin(k theta), 1 <= k <= max_mode, with
// coefficient scale 1/k, projected onto T_v B.
std::vector<Field> random_tangent_fields(const Manifold& man, const Field& v, int count, int max_mode,
                                         std::mt19937_64& rng);

std::vector<double> log_spaced(double lo, double hi, int count);

struct SampleSet {
  std::vector<Sample> samples;
  std::vector<std::string> warnings;
};

// minimizers must satisfy sup |EL residual| < verify_tol.
SampleSet sample_deficit_distance(const Manifold& man, const std::vector<Field>& minimizers, double y_ref,
                                  const std::vector<Direction>& directions, const std::vector<double>& radii,
                                  double verify_tol = 1e-8);

struct FitWindow {
  double lo = 1e-3;
  double hi = 5e-2;
};

struct StabilityFit {
  std::vector<Sample> samples;  // the samples used
  double slope = 0.0;
  double gamma_hat = 0.0;       // slope - 2
  double c_hat = 0.0;
  double r2 = 0.0;
  FitWindow window;
};

// log(deficit) = log(c) + slope log(distance) over samples with radius in the
// window and deficit > 10 noise.
StabilityFit fit_exponent(const std::vector<Sample>& samples, FitWindow window = {}, double noise = 1e-13,
                          int min_samples = 8);

struct SuperquadraticRow {
  double t = 0.0;
  double distance = 0.0;  // |u_t - v|_{W12}
  double deficit = 0.0;
  std::vector<double> ratios;  // deficit / distance^{2+gamma}
};

struct SuperquadraticFamily {
  std::vector<double> gammas;
  Eigen::VectorXd direction;
  std::vector<SuperquadraticRow> rows;
  double slope = 0.0;
  double r2 = 0.0;
};

// u_t along the AS_p maximizer of a nonintegrable model, deficit relative to Q(v).
SuperquadraticFamily superquadratic_family(const GraphMap& map, const ReducedModel& model,
                                           const std::vector<double>& t_values,
                                           std::vector<double> gammas = {0.5, 1.0, 1.5, 1.9});

struct LojasiewiczResult {
  double exponent = 0.0;   // 2 + gamma_star
  double gamma_star = 0.0;
  double c_star = 0.0;
  double r2 = 0.0;
  std::vector<Eigen::VectorXd> critical_points;
  int grid_points = 0;
};

// Brute force over a grid of B(0, radius) with grid_density points per axis.
LojasiewiczResult lojasiewicz_check(const Polynomial& q, double radius, int grid_density);

struct Decomposition {
  Eigen::VectorXd x;          // kernel coordinates of u - v
  double deficit = 0.0;       // Q(u) - Y
  double term_i = 0.0;        // Q(u) - Q(u_L), integrated along the segment
  double term_ii = 0.0;       // Q(u_L) - Y
  double perp_w12 = 0.0;      // |u - u_L|_{W12}
  double coercive_bound = 0.0;  // lambda_1 |u - u_L|^2_{W12} / 4
};

// u_L = v + x.e + F(x.e) with x = pi_K(u - v).
Decomposition decompose_deficit(const GraphMap& map, const Field& u, double y_ref, double lambda1,
                                int quadrature_nodes = 20);

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace yamabe
