#pragma once

// Background geometry of the product S^1(L) x S^{n-1}(1) and conformal changes
// g_u = u^{4/(n-2)} g restricted to factors that depend on the circle only.

#include "yamabe/spectral.hpp"

namespace yamabe {

struct Manifold {
  int dimension = 3;                // n
  double circle_length = 1.0;       // L, radius of the circle factor
  double scalar_curvature = 2.0;    // R_g = (n-1)(n-2)
  double conformal_constant = 8.0;  // c_n = 4(n-1)/(n-2)
  double critical_exponent = 6.0;   // 2* = 2n/(n-2)
  double sphere_volume = 0.0;       // vol(S^{n-1}(1))
  double volume = 0.0;              // 2 pi L vol(S^{n-1})

  // Circle length at which the constant factor acquires a kernel: 1/sqrt(n-2).
  double critical_length() const;

  GridPtr make_grid(int size) const;
};

// Throws DomainError unless n >= 3 and L > 0.
Manifold make_product_manifold(int n, double circle_length);

double critical_length(int n);

// vol(S^k) = 2 pi^{(k+1)/2} / Gamma((k+1)/2).
double unit_sphere_volume(int k);

// Throws DomainError naming the first node where u <= 0.
void require_positive(const Field& u, const char* what = "conformal factor");

// -c_n Laplacian(u) + R_g u.
Field conformal_laplacian(const Manifold& man, const Field& u);

// Scalar curvature of u^{4/(n-2)} g at the nodes: u^{1-2*}(-c_n Lap u + R_g u).
Field conformal_scalar_curvature(const Manifold& man, const Field& u);

// The conformal representative h = phi^{4/(n-2)} g of the product class,
// with its own Laplacian, volume density and scalar curvature computed from
// the conformal-change formulas (not by pulling back to g).
class ConformalRepresentative {
 public:
  ConformalRepresentative(Manifold base, Field factor);

  const Manifold& base() const { return base_; }
  const Field& factor() const { return factor_; }

  // Laplace-Beltrami operator of h on circle-dependent functions:
  // phi^{-4/(n-2)} (w'' + 2 phi' w' / phi).
  Field laplacian(const Field& w) const;
  Field scalar_curvature() const;
  // -c_n Lap_h + R_h.
  Field conformal_laplacian(const Field& w) const;

  // d vol_h / d vol_g = phi^{2*}.
  Field volume_density() const;
  double integrate(const Field& f) const;
  // int |grad_h f|^2 d vol_h.
  double dirichlet(const Field& f) const;
  double volume() const;

 private:
  Manifold base_;
  Field factor_;
  Field factor_derivative_;
};

}  // namespace yamabe
