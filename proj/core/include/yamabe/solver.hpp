#pragma once

// Critical points of Q on B: preconditioned descent, bordered Newton, and a
// sweep of the constant branch across circle lengths.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "yamabe/manifold.hpp"

namespace yamabe {

struct SolverOptions {
  double gradient_tol = 1e-5;  // descent hands over to Newton below this
  double residual_tol = 1e-10; // sup-norm of the Euler-Lagrange residual
  int max_iter = 20000;
  int newton_max_iter = 12;
  int max_halvings = 40;
  double armijo = 1e-4;
  double kernel_tol = 1e-7;
  bool polish = true;
};

struct CriticalPoint {
  Field u;
  double q = 0.0;
  double el_residual_sup = 0.0;
  int negative_count = 0;
  int kernel_dimension = 0;
  std::string branch{};  // "constant" or "nonconstant"
  int descent_iterations = 0;
  int newton_iterations = 0;
};

// The unit-volume constant factor with its Morse data.
CriticalPoint constant_point(const Manifold& man, int grid_size, double kernel_tol = 1e-7);

// Descent history of Q along accepted iterates (filled when non-null).
CriticalPoint minimize(const Manifold& man, const Field& u0, const SolverOptions& opts = {},
                       std::vector<double>* history = nullptr);

CriticalPoint newton_critical_point(const Manifold& man, const Field& u0, const SolverOptions& opts = {});

// Fills the Morse data and branch tag of a converged point.
CriticalPoint classify_point(const Manifold& man, const Field& u, double kernel_tol);

struct MinimizerSearch {
  std::vector<CriticalPoint> points;  // distinct up to rotation, ascending Q
  int starts = 0;
  std::vector<std::string> failures;  // one message per start that did not converge
  double y_ref() const;
};

// Constant point plus descents from constant + 0.1 cos(theta - phase), random phase.
MinimizerSearch find_minimizers(const Manifold& man, int grid_size, int starts, std::uint64_t seed,
                                const SolverOptions& opts = {});

struct BifurcationRow {
  double length = 0.0;
  double eig0 = 0.0;  // two smallest constant-base eigenvalues
  double eig1 = 0.0;
  double q_constant = 0.0;
  std::optional<double> q_nonconstant;
  std::string note;
};

struct BifurcationDiagram {
  int dimension = 3;
  std::vector<BifurcationRow> rows;
};

BifurcationDiagram continuation(int n, double l_min, double l_max, int steps, int grid_size, std::uint64_t seed,
                                const SolverOptions& opts = {}, bool search_nonconstant = true);

// Circle length where the smallest constant-base eigenvalue changes sign,
// by linear interpolation between sweep points.
std::optional<double> kernel_onset(const BifurcationDiagram& diagram);

}  // namespace yamabe
