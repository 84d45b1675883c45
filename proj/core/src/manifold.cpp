#include "yamabe/manifold.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "yamabe/errors.hpp"

namespace yamabe {

double unit_sphere_volume(int k) {
  const double m = 0.5 * (k + 1);
  return 2.0 * std::pow(std::numbers::pi, m) / std::tgamma(m);
}

double critical_length(int n) {
  if (n < 3) throw DomainError("dimension must be at least 3");
  return 1.0 / std::sqrt(static_cast<double>(n - 2));
}

double Manifold::critical_length() const { return yamabe::critical_length(dimension); }

GridPtr Manifold::make_grid(int size) const {
  return yamabe::make_grid(size, circle_length, sphere_volume);
}

Manifold make_product_manifold(int n, double circle_length) {
  if (n < 3) throw DomainError("dimension must be at least 3, got " + std::to_string(n));
  if (!(circle_length > 0.0) || !std::isfinite(circle_length)) {
    throw DomainError("circle length must be positive and finite, got " + std::to_string(circle_length));
  }
  Manifold m;
  m.dimension = n;
  m.circle_length = circle_length;
  m.scalar_curvature = static_cast<double>((n - 1) * (n - 2));
  m.conformal_constant = 4.0 * (n - 1) / static_cast<double>(n - 2);
  m.critical_exponent = 2.0 * n / static_cast<double>(n - 2);
  m.sphere_volume = unit_sphere_volume(n - 1);
  m.volume = 2.0 * std::numbers::pi * circle_length * m.sphere_volume;
  return m;
}

void require_positive(const Field& u, const char* what) {
  for (int j = 0; j < u.size(); ++j) {
    if (!(u[j] > 0.0)) {
      throw DomainError(std::string(what) + " is not positive at node " + std::to_string(j) +
                        " (value " + std::to_string(u[j]) + ")");
    }
  }
}

Field conformal_laplacian(const Manifold& man, const Field& u) {
  return -man.conformal_constant * laplacian(u) + man.scalar_curvature * u;
}

Field conformal_scalar_curvature(const Manifold& man, const Field& u) {
  require_positive(u);
  return u.pow(1.0 - man.critical_exponent) * conformal_laplacian(man, u);
}

ConformalRepresentative::ConformalRepresentative(Manifold base, Field factor)
    : base_(base), factor_(std::move(factor)), factor_derivative_(derivative(factor_)) {
  require_positive(factor_, "representative factor");
}

Field ConformalRepresentative::laplacian(const Field& w) const {
  const double n = base_.dimension;
  const Field flat = yamabe::laplacian(w) + 2.0 * (factor_derivative_ / factor_) * derivative(w);
  return factor_.pow(-4.0 / (n - 2.0)) * flat;
}

Field ConformalRepresentative::scalar_curvature() const {
  return conformal_scalar_curvature(base_, factor_);
}

Field ConformalRepresentative::conformal_laplacian(const Field& w) const {
  return -base_.conformal_constant * laplacian(w) + scalar_curvature() * w;
}

Field ConformalRepresentative::volume_density() const { return factor_.pow(base_.critical_exponent); }

double ConformalRepresentative::integrate(const Field& f) const {
  return yamabe::integrate(f * volume_density());
}

double ConformalRepresentative::dirichlet(const Field& f) const {
  // |grad_h f|^2 dvol_h = phi^{-4/(n-2)} |f'|^2 phi^{2*} dvol_g = phi^2 |f'|^2 dvol_g.
  const Field df = derivative(f);
  return yamabe::integrate(factor_ * factor_ * df * df);
}

double ConformalRepresentative::volume() const { return yamabe::integrate(volume_density()); }

}  // namespace yamabe
