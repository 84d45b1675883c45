#include "yamabe/hessian.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Householder>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <string>

#include "yamabe/energy.hpp"
#include "yamabe/errors.hpp"

namespace yamabe {

namespace {

// Potential term R_g - (2*-1) lambda v^{2*-2} at the nodes.
Eigen::VectorXd hessian_potential(const Manifold& man, const Field& v) {
  const double p = man.critical_exponent;
  const double lambda = euler_lagrange_multiplier(man, v);
  return (man.scalar_curvature - (p - 1.0) * lambda * v.pow(p - 2.0).values().array()).matrix();
}

Eigen::MatrixXd operator_matrix(const Manifold& man, const Field& v) {
  Eigen::MatrixXd a = -man.conformal_constant * laplacian_matrix(*v.grid());
  a.diagonal() += hessian_potential(man, v);
  return a;
}

}  // namespace

Field hessian_apply(const Manifold& man, const Field& v, const Field& phi) {
  require_positive(v);
  require_same_grid(v, phi);
  const Field t = orthogonal_tangent_project(man, v, phi);
  const Field at = -man.conformal_constant * laplacian(t) + Field(v.grid(), hessian_potential(man, v).cwiseProduct(t.values()));
  return orthogonal_tangent_project(man, v, at);
}

double constant_mode_eigenvalue(const Manifold& man, int k) {
  const double mu = (k / man.circle_length) * (k / man.circle_length);
  return man.conformal_constant * mu - (man.critical_exponent - 2.0) * man.scalar_curvature;
}

std::vector<Field> Spectrum::kernel_basis() const {
  std::vector<Field> basis;
  basis.reserve(kernel_indices.size());
  for (int i : kernel_indices) basis.push_back(eigenfields[i]);
  return basis;
}

double Spectrum::smallest_positive() const {
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    const bool in_kernel = std::find(kernel_indices.begin(), kernel_indices.end(), static_cast<int>(i)) !=
                           kernel_indices.end();
    if (!in_kernel && eigenvalues[i] > 0.0) return eigenvalues[i];
  }
  throw NumericalError("spectrum has no positive eigenvalue");
}

Eigen::MatrixXd tangent_basis(const Manifold& man, const Field& v) {
  const int n = v.size();
  Eigen::VectorXd normal = v.pow(man.critical_exponent - 1.0).values();
  normal.normalize();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(normal);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - 1);
}

Spectrum hessian_spectrum(const Manifold& man, const Field& v, double kernel_tol) {
  require_positive(v);
  if (!(kernel_tol > 0.0)) throw DomainError("kernel tolerance must be positive");
  const Eigen::MatrixXd t = tangent_basis(man, v);
  Eigen::MatrixXd m = t.transpose() * operator_matrix(man, v) * t;
  m = 0.5 * (m + m.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver did not converge on the tangent operator");
  }
  const Eigen::VectorXd& evals = solver.eigenvalues();
  const Eigen::MatrixXd vecs = t * solver.eigenvectors();
  const double inv_sqrt_w = 1.0 / std::sqrt(v.grid()->weight());

  Spectrum s{v, {}, {}, {}, 0, 0.0, kernel_tol};
  s.spectral_radius = evals.cwiseAbs().maxCoeff();
  const double threshold = kernel_tol * s.spectral_radius;
  s.eigenvalues.reserve(evals.size());
  s.eigenfields.reserve(evals.size());
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    s.eigenvalues.push_back(evals[i]);
    s.eigenfields.emplace_back(v.grid(), vecs.col(i) * inv_sqrt_w);
    if (std::abs(evals[i]) < threshold) {
      s.kernel_indices.push_back(static_cast<int>(i));
    } else if (evals[i] < 0.0) {
      ++s.negative_count;
    }
  }
  return s;
}

double w12_coercivity(const Manifold& /*man*/, const Field& v, const Spectrum& spectrum) {
  const int n = v.size();
  const double sqrt_w = std::sqrt(v.grid()->weight());
  std::vector<int> keep;
  for (int i = 0; i < static_cast<int>(spectrum.eigenvalues.size()); ++i) {
    if (std::find(spectrum.kernel_indices.begin(), spectrum.kernel_indices.end(), i) ==
        spectrum.kernel_indices.end()) {
      keep.push_back(i);
    }
  }
  if (keep.empty()) throw NumericalError("no directions outside the kernel");
  Eigen::MatrixXd y(n, static_cast<Eigen::Index>(keep.size()));
  Eigen::VectorXd diag(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    y.col(c) = spectrum.eigenfields[keep[c]].values() * sqrt_w;
    diag[c] = spectrum.eigenvalues[keep[c]];
  }
  Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(n, n) - laplacian_matrix(*v.grid());
  Eigen::MatrixXd b = y.transpose() * gram * y;
  b = 0.5 * (b + b.transpose()).eval();
  Eigen::MatrixXd a = diag.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, b, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("generalized eigensolver failed");
  // Full second variation = 2 x half-Hessian.
  return 2.0 * solver.eigenvalues().minCoeff();
}

}  // namespace yamabe
