#pragma once

// Lyapunov-Schmidt reduction at a critical point v with kernel K:
// the graph map F : K -> K^perp, the reduced energy q(x) = Q(v + x.e + F(x.e)),
// its homogeneous Taylor expansion and the integrability/AS_p tests.

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "yamabe/manifold.hpp"
#include "yamabe/polynomial.hpp"

namespace yamabe {

struct GraphMapOptions {
  double tolerance = 1e-10;  // on |pi_{K perp} grad_B Q(lift)|_{L2}
  int max_iter = 20;
  double radius = 0.1;       // trust radius in kernel coordinates
};

struct Lift {
  Eigen::VectorXd x;           // kernel coordinates
  Field point;                 // v + x.e + F, unit volume
  Field correction;            // F(x.e), L2-orthogonal to K
  Eigen::VectorXd multipliers; // c with pi_K grad_B Q(point) = 2 sum c_i e_i
  double residual = 0.0;       // |pi_{K perp} grad_B Q(point)|_{L2}
  int iterations = 0;
};

class GraphMap {
 public:
  // kernel: fields tangent at v; they are re-orthonormalised in L2.
  GraphMap(Manifold man, Field base, const std::vector<Field>& kernel, GraphMapOptions opts = {});

  const Manifold& manifold() const { return man_; }
  const Field& base() const { return base_; }
  const std::vector<Field>& kernel() const { return kernel_; }
  int dimension() const { return static_cast<int>(kernel_.size()); }
  const GraphMapOptions& options() const { return opts_; }

  Field kernel_field(const Eigen::VectorXd& x) const;
  // <u - v, e_i>.
  Eigen::VectorXd coordinates(const Field& u) const;

  Lift solve(const Eigen::VectorXd& x) const;
  double reduced_energy(const Eigen::VectorXd& x) const;
  // grad q(x) = pi_K grad_B Q at the lift, in kernel coordinates.
  Eigen::VectorXd reduced_gradient(const Eigen::VectorXd& x) const;

  // |pi_{K perp} grad_B Q(u)|_{L2} with the gradient represented in T_v B.
  double projected_residual(const Field& u) const;

 private:
  Manifold man_;
  Field base_;
  std::vector<Field> kernel_;
  Eigen::MatrixXd perp_;  // nodal values of an L2-orthonormal basis of K^perp
  GraphMapOptions opts_;
};

Lift solve_graph_map(const Manifold& man, const Field& v, const std::vector<Field>& kernel,
                     const Eigen::VectorXd& x, GraphMapOptions opts = {});

struct DegreeFit {
  int degree = 0;
  std::vector<Exponent> exponents;
  std::vector<double> coefficients;
  double norm = 0.0;       // symmetric-tensor Frobenius norm
  double threshold = 0.0;  // fit-noise level for this degree
  bool significant = false;
};

struct AspResult {
  int degree = 0;
  bool holds = false;
  double maximum = 0.0;
  Eigen::VectorXd maximizer;
};

struct TaylorOptions {
  std::vector<double> radii{0.02, 0.04, 0.06, 0.08, 0.1};
  int j_max = 6;
  double noise_floor = 1e-9;
  double max_condition = 1e10;
  GraphMapOptions graph;
};

struct ReducedModel {
  Field base;
  std::vector<Field> kernel{};
  double q0 = 0.0;
  bool nondegenerate = false;
  std::vector<DegreeFit> degrees{};
  Polynomial polynomial{};  // q(x) - q0
  // Integrability order; p_min < p_max when two orders are indistinguishable
  // from fit noise. Empty when no degree is significant.
  std::optional<int> p_min{};
  std::optional<int> p_max{};
  std::vector<AspResult> asp{};  // one entry per candidate order
  double fit_rms = 0.0;
  double condition_number = 0.0;
  int sample_count = 0;

  int dimension() const { return static_cast<int>(kernel.size()); }
  const DegreeFit* degree(int j) const;
  // AS_p verdict for the lowest candidate order.
  bool asp_holds() const { return !asp.empty() && asp.front().holds; }
  Eigen::VectorXd asp_maximizer() const;
};

ReducedModel taylor_of_q(const Manifold& man, const Field& v, const std::vector<Field>& kernel,
                         const TaylorOptions& opts = {});

AspResult check_asp(const Polynomial& part, int degree, double threshold);
AspResult check_asp(const ReducedModel& model);

enum class Integrability { nondegenerate, integrable, nonintegrable };

Integrability classify_integrability(const ReducedModel& model, double tol);
std::string to_string(Integrability verdict);

}  // namespace yamabe
