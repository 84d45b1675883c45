#include "yamabe/polynomial.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "yamabe/errors.hpp"

namespace yamabe {

std::vector<Exponent> monomials(int variables, int degree) {
  if (variables < 1 || degree < 0) throw DomainError("monomials need variables >= 1 and degree >= 0");
  std::vector<Exponent> out;
  Exponent e(variables, 0);
  std::function<void(int, int)> fill = [&](int i, int left) {
    if (i == variables - 1) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[i] = k;
      fill(i + 1, left - k);
    }
  };
  fill(0, degree);
  return out;
}

double monomial_value(const Exponent& e, const Eigen::VectorXd& x) {
  double v = 1.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (int k = 0; k < e[i]; ++k) v *= x[static_cast<Eigen::Index>(i)];
  }
  return v;
}

double tensor_weight(const Exponent& e) {
  double w = 1.0;
  const int total = std::accumulate(e.begin(), e.end(), 0);
  for (int k : e) w *= std::tgamma(k + 1.0);
  return w / std::tgamma(total + 1.0);
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    if (c != 0.0) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  }
  return d;
}

void Polynomial::add(const Exponent& e, double coefficient) {
  if (static_cast<int>(e.size()) != variables_) throw DomainError("exponent size does not match variable count");
  terms_[e] += coefficient;
}

double Polynomial::coefficient(const Exponent& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::operator()(const Eigen::VectorXd& x) const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) s += c * monomial_value(e, x);
  return s;
}

Eigen::VectorXd Polynomial::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(variables_);
  for (const auto& [e, c] : terms_) {
    for (int i = 0; i < variables_; ++i) {
      if (e[i] == 0) continue;
      Exponent d = e;
      --d[i];
      g[i] += c * e[i] * monomial_value(d, x);
    }
  }
  return g;
}

Eigen::MatrixXd Polynomial::hessian(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(variables_, variables_);
  for (const auto& [e, c] : terms_) {
    for (int i = 0; i < variables_; ++i) {
      if (e[i] == 0) continue;
      Exponent d = e;
      const double fi = d[i]--;
      for (int j = 0; j < variables_; ++j) {
        if (d[j] == 0) continue;
        Exponent dd = d;
        const double fj = dd[j]--;
        h(i, j) += c * fi * fj * monomial_value(dd, x);
      }
    }
  }
  return h;
}

Polynomial Polynomial::homogeneous_part(int degree) const {
  Polynomial out(variables_);
  for (const auto& [e, c] : terms_) {
    if (std::accumulate(e.begin(), e.end(), 0) == degree) out.add(e, c);
  }
  return out;
}

double Polynomial::degree_norm(int degree) const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) {
    if (std::accumulate(e.begin(), e.end(), 0) == degree) s += c * c * tensor_weight(e);
  }
  return std::sqrt(s);
}

Polynomial Polynomial::radial(int variables, int power, double scale) {
  // Multinomial expansion of (x_1^2 + ... + x_l^2)^power.
  Polynomial out(variables);
  for (const Exponent& e : monomials(variables, power)) {
    double c = std::tgamma(power + 1.0);
    Exponent doubled(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      c /= std::tgamma(e[i] + 1.0);
      doubled[i] = 2 * e[i];
    }
    out.add(doubled, scale * c);
  }
  return out;
}

}  // namespace yamabe
