#pragma once

// Second variation of Q on B. All operators here represent
//   1/2 grad^2_B Q(v)[phi, eta] = <A phi, eta>,  phi, eta in T_v B,
//   A = -c_n Lap + R_g - (2*-1) Q(v) v^{2*-2},
// i.e. the half-Hessian convention, as an L2-self-adjoint operator on T_v B.

#include <Eigen/Core>

#include <vector>

#include "yamabe/manifold.hpp"

namespace yamabe {

// P A P phi with P the L2-orthogonal projection onto T_v B.
Field hessian_apply(const Manifold& man, const Field& v, const Field& phi);

// c_n (k/L)^2 - (2*-2) R_g: the eigenvalue of the half-Hessian on cos(k theta)
// and sin(k theta) at the unit-volume constant factor.
double constant_mode_eigenvalue(const Manifold& man, int k);

struct Spectrum {
  Field base;
  std::vector<double> eigenvalues;  // ascending
  std::vector<Field> eigenfields;   // L2-orthonormal, tangent at base
  std::vector<int> kernel_indices;
  int negative_count = 0;
  double spectral_radius = 0.0;
  double kernel_tol = 0.0;

  int kernel_dimension() const { return static_cast<int>(kernel_indices.size()); }
  std::vector<Field> kernel_basis() const;
  // Smallest eigenvalue strictly above the kernel threshold.
  double smallest_positive() const;
};

// Dense symmetric eigendecomposition of A restricted to T_v B (dimension N-1).
// Kernel: |eigenvalue| < kernel_tol * max |eigenvalue|.
Spectrum hessian_spectrum(const Manifold& man, const Field& v, double kernel_tol = 1e-7);

// Smallest nonzero eigenvalue of the full second variation grad^2_B Q(v)
// measured against the W^{1,2} inner product on the complement of the kernel
// in T_v B, so that grad^2_B Q(v)[w, w] >= lambda_1 |w|_{W12}^2 there.
double w12_coercivity(const Manifold& man, const Field& v, const Spectrum& spectrum);

// Orthonormal (in the node-weighted L2 sense, scaled by sqrt(weight)) basis of
// T_v B as columns; used by the dense assemblies.
Eigen::MatrixXd tangent_basis(const Manifold& man, const Field& v);

}  // namespace yamabe
