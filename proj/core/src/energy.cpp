#include "yamabe/energy.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "yamabe/errors.hpp"

namespace yamabe {

double total_energy(const Manifold& man, const Field& u) {
  return l2_inner(conformal_laplacian(man, u), u);
}

double volume_integral(const Manifold& man, const Field& u) {
  return integrate(u.pow(man.critical_exponent));
}

double yamabe_energy(const Manifold& man, const Field& u) {
  require_positive(u);
  const double p = man.critical_exponent;
  return total_energy(man, u) / std::pow(volume_integral(man, u), 2.0 / p);
}

double euler_lagrange_multiplier(const Manifold& man, const Field& u) {
  require_positive(u);
  // Q ||u||^{2-p} = E / V.
  return total_energy(man, u) / volume_integral(man, u);
}

Field normalize_volume(const Manifold& man, const Field& u) {
  require_positive(u);
  return u / std::pow(volume_integral(man, u), 1.0 / man.critical_exponent);
}

Field tangent_project(const Manifold& man, const Field& v, const Field& phi) {
  const Field normal = v.pow(man.critical_exponent - 1.0);
  return phi - l2_inner(normal, phi) * v;
}

Field orthogonal_tangent_project(const Manifold& man, const Field& v, const Field& phi) {
  const Field normal = v.pow(man.critical_exponent - 1.0);
  return phi - (l2_inner(normal, phi) / l2_inner(normal, normal)) * normal;
}

Field el_residual(const Manifold& man, const Field& u) {
  const double lambda = euler_lagrange_multiplier(man, u);
  return conformal_laplacian(man, u) - lambda * u.pow(man.critical_exponent - 1.0);
}

namespace {

double gradient_scale(const Manifold& man, const Field& u) {
  return 2.0 / std::pow(volume_integral(man, u), 2.0 / man.critical_exponent);
}

}  // namespace

Field full_gradient(const Manifold& man, const Field& u) {
  return gradient_scale(man, u) * el_residual(man, u);
}

Field gradient(const Manifold& man, const Field& u) { return gradient_in_frame(man, u, u); }

Field gradient_in_frame(const Manifold& man, const Field& u, const Field& frame) {
  require_same_grid(u, frame);
  const double p = man.critical_exponent;
  const Field r = el_residual(man, u);
  const Field normal_u = u.pow(p - 1.0);
  const Field normal_frame = frame.pow(p - 1.0);
  const double alpha = l2_inner(normal_frame, r) / l2_inner(normal_frame, normal_u);
  return gradient_scale(man, u) * (r - alpha * normal_u);
}

double conformal_distance(const Manifold& man, const Field& u, const Field& v) {
  const Field d = (u - v).map([](double x) { return std::abs(x); });
  return std::pow(integrate(d.pow(man.critical_exponent)), 1.0 / man.critical_exponent);
}

double conformal_distance_star(const Manifold& man, const Field& u, const Field& v, double y) {
  if (y < 0.0) throw DomainError("the starred distance is defined only for Y >= 0");
  const Field w = u - v;
  const double form = man.conformal_constant * dirichlet_inner(w, w) + y * l2_inner(w, w);
  const double scale = man.conformal_constant * w12_inner(w, w) + std::abs(y) * l2_inner(w, w);
  if (form < -1e-12 * std::max(scale, std::numeric_limits<double>::min())) {
    throw NumericalError("starred quadratic form is not positive (" + std::to_string(form) + ")");
  }
  return std::sqrt(std::max(form, 0.0));
}

namespace {

// W12 pairing <u, rotate(v, a)> as sum_k w_k (P_k cos k a + S_k sin k a).
struct RotationPairing {
  std::vector<double> cos_terms;
  std::vector<double> sin_terms;
  double nyquist = 0.0;
  int size = 0;

  RotationPairing(const Field& u, const Field& v) {
    const Eigen::VectorXd a = u.coefficients();
    const Eigen::VectorXd b = v.coefficients();
    const Grid& g = *u.grid();
    size = u.size();
    const double vol = g.volume();
    const double inv_len2 = 1.0 / (g.circle_length() * g.circle_length());
    cos_terms.assign(size / 2, 0.0);
    sin_terms.assign(size / 2, 0.0);
    cos_terms[0] = vol * a[0] * b[0];
    for (int k = 1; k < size / 2; ++k) {
      const double w = 0.5 * vol * (1.0 + k * k * inv_len2);
      cos_terms[k] = w * (a[2 * k - 1] * b[2 * k - 1] + a[2 * k] * b[2 * k]);
      sin_terms[k] = w * (a[2 * k] * b[2 * k - 1] - a[2 * k - 1] * b[2 * k]);
    }
    const double kn = 0.5 * size;
    nyquist = vol * (1.0 + kn * kn * inv_len2) * a[size - 1] * b[size - 1];
  }

  // Returns value, first and second derivative in the angle.
  std::array<double, 3> eval(double angle) const {
    std::array<double, 3> out{cos_terms[0], 0.0, 0.0};
    for (int k = 1; k < size / 2; ++k) {
      const double c = std::cos(k * angle);
      const double s = std::sin(k * angle);
      out[0] += cos_terms[k] * c + sin_terms[k] * s;
      out[1] += k * (-cos_terms[k] * s + sin_terms[k] * c);
      out[2] += -k * k * (cos_terms[k] * c + sin_terms[k] * s);
    }
    const double kn = 0.5 * size;
    out[0] += nyquist * std::cos(kn * angle);
    out[1] += -kn * nyquist * std::sin(kn * angle);
    out[2] += -kn * kn * nyquist * std::cos(kn * angle);
    return out;
  }
};

}  // namespace

double best_rotation(const Field& u, const Field& v) {
  require_same_grid(u, v);
  const RotationPairing pairing(u, v);
  const double scale = std::abs(pairing.cos_terms[0]) + 1e-300;

  // Phase alignment on the first mode carrying a non-negligible pairing.
  int mode = 0;
  double phase = 0.0;
  for (int k = 1; k < u.size() / 2; ++k) {
    const double amp = std::hypot(pairing.cos_terms[k], pairing.sin_terms[k]);
    if (amp > 1e-14 * scale) {
      mode = k;
      phase = std::atan2(pairing.sin_terms[k], pairing.cos_terms[k]) / k;
      break;
    }
  }
  if (mode == 0) return 0.0;

  // The first-mode phase is ambiguous by 2 pi / mode; keep the best branch.
  double best = phase;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int m = 0; m < mode; ++m) {
    const double a = phase + 2.0 * std::numbers::pi * m / mode;
    const double val = pairing.eval(a)[0];
    if (val > best_value) {
      best_value = val;
      best = a;
    }
  }
  // Local Newton refinement on d/da <u, R_a v> = 0.
  double a = best;
  for (int it = 0; it < 50; ++it) {
    const auto d = pairing.eval(a);
    if (!(d[2] < 0.0)) break;
    const double step = -d[1] / d[2];
    a += step;
    if (std::abs(step) < 1e-15) break;
  }
  if (pairing.eval(a)[0] < best_value) a = best;
  return std::remainder(a, 2.0 * std::numbers::pi);
}

Alignment align_to_set(const Field& u, std::span<const Field> set) {
  if (set.empty()) throw DomainError("distance to an empty set");
  const double unorm = w12_norm(u);
  if (!(unorm > 0.0)) throw DomainError("distance normalization by a zero field");
  Alignment best{std::numeric_limits<double>::infinity(), 0, 0.0, 0.0};
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double angle = best_rotation(u, set[i]);
    const Field r = rotate(set[i], angle);
    const double scale = std::max(0.0, w12_inner(u, r)) / w12_inner(r, r);
    const double d = w12_norm(u - scale * r) / unorm;
    if (d < best.distance) best = {d, i, angle, scale};
  }
  return best;
}

double distance_to_set(const Field& u, std::span<const Field> set) { return align_to_set(u, set).distance; }

EnergyReport energy_report(const Manifold& man, const Field& u, double reference_energy) {
  EnergyReport r;
  r.q = yamabe_energy(man, u);
  r.lambda = euler_lagrange_multiplier(man, u);
  r.deficit = r.q - reference_energy;
  r.el_residual_sup = el_residual(man, u).values().cwiseAbs().maxCoeff();
  return r;
}

}  // namespace yamabe
