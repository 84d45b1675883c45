#pragma once

// Real polynomials in a few variables, stored as a sparse map from exponent
// vectors to coefficients. Used for the fitted reduced energy.

#include <Eigen/Core>

#include <map>
#include <vector>

namespace yamabe {

using Exponent = std::vector<int>;

// All exponent vectors of total degree `degree` in `variables` variables,
// in lexicographic order (highest power of the first variable first).
std::vector<Exponent> monomials(int variables, int degree);

double monomial_value(const Exponent& e, const Eigen::VectorXd& x);

// alpha! / |alpha|!, the weight that turns monomial coefficients into the
// Frobenius norm of the associated symmetric tensor.
double tensor_weight(const Exponent& e);

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int variables) : variables_(variables) {}

  int variables() const { return variables_; }
  int degree() const;
  const std::map<Exponent, double>& terms() const { return terms_; }

  void add(const Exponent& e, double coefficient);
  double coefficient(const Exponent& e) const;

  double operator()(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

  Polynomial homogeneous_part(int degree) const;
  // Frobenius norm of the symmetric tensor of the degree-j part.
  double degree_norm(int degree) const;

  // sum_i x_i^2 raised to `power`, i.e. |x|^{2 power}.
  static Polynomial radial(int variables, int power, double scale = 1.0);

 private:
  int variables_ = 0;
  std::map<Exponent, double> terms_;
};

}  // namespace yamabe
