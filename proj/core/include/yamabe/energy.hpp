#pragma once

// The Yamabe quotient on S^1(L) x S^{n-1}, the unit-volume constraint set
//   B = { u > 0 : int u^{2*} = 1 },
// its first variation, and the distances used by the stability experiments.

#include <cstddef>
#include <span>

#include "yamabe/manifold.hpp"

namespace yamabe {

struct EnergyReport {
  double q = 0.0;
  double lambda = 0.0;
  double deficit = 0.0;
  double el_residual_sup = 0.0;
};

// int c_n |grad u|^2 + R_g u^2.
double total_energy(const Manifold& man, const Field& u);
// int u^{2*}.
double volume_integral(const Manifold& man, const Field& u);

// Q(u) = int (c_n |grad u|^2 + R_g u^2) / (int u^{2*})^{2/2*}. Requires u > 0.
double yamabe_energy(const Manifold& man, const Field& u);

// lambda = Q(u) ||u||_{2*}^{2-2*}; equals Q(u) on B.
double euler_lagrange_multiplier(const Manifold& man, const Field& u);

Field normalize_volume(const Manifold& man, const Field& u);

// phi - (int v^{2*-1} phi) v. Idempotent, annihilates v, lands in T_v B.
Field tangent_project(const Manifold& man, const Field& v, const Field& phi);

// L2-orthogonal projection onto T_v B:
// phi - (<v^{2*-1}, phi> / |v^{2*-1}|^2) v^{2*-1}.
Field orthogonal_tangent_project(const Manifold& man, const Field& v, const Field& phi);

// -c_n Lap u + R_g u - lambda u^{2*-1}.
Field el_residual(const Manifold& man, const Field& u);

// L2 Riesz representative of dQ(u) on the whole space. Orthogonal to u.
Field full_gradient(const Manifold& man, const Field& u);

// Riesz representative of dQ(u) restricted to T_u B that itself lies in T_u B.
Field gradient(const Manifold& man, const Field& u);

// Representative of dQ(u)|_{T_u B} lying in T_frame B, obtained by removing a
// multiple of u^{2*-1} (the normal of B at u). Equal to gradient() when
// frame == u.
Field gradient_in_frame(const Manifold& man, const Field& u, const Field& frame);

// (int |u - v|^{2*})^{1/2*}.
double conformal_distance(const Manifold& man, const Field& u, const Field& v);

// (int c_n |grad(u - v)|^2 + Y (u - v)^2)^{1/2}. Throws DomainError for Y < 0.
double conformal_distance_star(const Manifold& man, const Field& u, const Field& v, double y);

// Q is scale invariant, so the minimizers form a cone: each element v of a
// minimizer list stands for all c R v with c >= 0 and R a circle rotation.
struct Alignment {
  double distance = 0.0;   // |u - c R v|_{W12} / |u|_{W12}, at most 1
  std::size_t index = 0;   // which element of the set
  double angle = 0.0;      // rotation applied to that element
  double scale = 0.0;      // c
};

// Best rotation of v (in the W^{1,2} sense) towards u.
double best_rotation(const Field& u, const Field& v);

Alignment align_to_set(const Field& u, std::span<const Field> set);

// min over the set, circle rotations and scales c >= 0 of
// |u - c v|_{W12} / |u|_{W12}.
double distance_to_set(const Field& u, std::span<const Field> set);

EnergyReport energy_report(const Manifold& man, const Field& u, double reference_energy);

}  // namespace yamabe
