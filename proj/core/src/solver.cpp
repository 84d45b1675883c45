#include "yamabe/solver.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "yamabe/energy.hpp"
#include "yamabe/errors.hpp"
#include "yamabe/hessian.hpp"

namespace yamabe {

namespace {

// Inverse of c_n(-Lap) + R_g, diagonal on the trigonometric modes.
Field precondition(const Manifold& man, const Field& r) {
  Eigen::VectorXd c = r.coefficients();
  const int n = r.size();
  const double l = man.circle_length;
  auto symbol = [&](int k) { return man.conformal_constant * (k / l) * (k / l) + man.scalar_curvature; };
  c[0] /= symbol(0);
  for (int k = 1; k < n / 2; ++k) {
    c[2 * k - 1] /= symbol(k);
    c[2 * k] /= symbol(k);
  }
  c[n - 1] /= symbol(n / 2);
  return Field::from_coefficients(r.grid(), c);
}

double sup_norm(const Field& f) { return f.values().cwiseAbs().maxCoeff(); }

bool is_nonconstant(const Field& u) { return u.max() - u.min() > 1e-8 * std::abs(u.max()); }

}  // namespace

CriticalPoint classify_point(const Manifold& man, const Field& u, double kernel_tol) {
  const Spectrum s = hessian_spectrum(man, u, kernel_tol);
  CriticalPoint cp{u};
  cp.q = yamabe_energy(man, u);
  cp.el_residual_sup = sup_norm(el_residual(man, u));
  cp.negative_count = s.negative_count;
  cp.kernel_dimension = s.kernel_dimension();
  cp.branch = is_nonconstant(u) ? "nonconstant" : "constant";
  return cp;
}

CriticalPoint constant_point(const Manifold& man, int grid_size, double kernel_tol) {
  const GridPtr grid = man.make_grid(grid_size);
  const Field u = Field::constant(grid, std::pow(man.volume, -1.0 / man.critical_exponent));
  return classify_point(man, u, kernel_tol);
}

CriticalPoint newton_critical_point(const Manifold& man, const Field& u0, const SolverOptions& opts) {
  require_positive(u0, "initial guess");
  Field u = normalize_volume(man, u0);
  double res = sup_norm(el_residual(man, u));

  const bool rotating = is_nonconstant(u);
  const Spectrum spec = hessian_spectrum(man, u, opts.kernel_tol);
  const int excess = spec.kernel_dimension() - (rotating ? 1 : 0);
  if (excess > 0) {
    throw SingularError("linearization is singular: kernel of dimension " + std::to_string(spec.kernel_dimension()) +
                        " at the starting point; use the reduction module (taylor_of_q) to resolve it");
  }
  if (res < opts.residual_tol) return classify_point(man, u, opts.kernel_tol);

  const int n = u.size();
  const double p = man.critical_exponent;
  const double w0 = u.grid()->weight();
  const Field ref = u;
  const Eigen::VectorXd tau = rotating ? derivative(ref).values() : Eigen::VectorXd();
  const int extra = rotating ? 2 : 1;
  Eigen::MatrixXd op = -man.conformal_constant * laplacian_matrix(*u.grid());
  op.diagonal().array() += man.scalar_curvature;

  double mu = 0.0;
  double nu = 0.0;
  auto system = [&](const Field& w, double m, double g) {
    Eigen::VectorXd f(n + extra);
    const double lambda = total_energy(man, w) / volume_integral(man, w);
    f.head(n) = conformal_laplacian(man, w).values() - (lambda - m) * w.pow(p - 1.0).values();
    if (rotating) f.head(n) += g * tau;
    f[n] = volume_integral(man, w) - 1.0;
    if (rotating) f[n + 1] = w0 * tau.dot((w - ref).values());
    return f;
  };

  for (int it = 1; it <= opts.newton_max_iter; ++it) {
    const Eigen::VectorXd f = system(u, mu, nu);
    const double energy = total_energy(man, u);
    const double volume = volume_integral(man, u);
    const double lambda = energy / volume;
    const Eigen::VectorXd lu = conformal_laplacian(man, u).values();
    const Eigen::VectorXd up1 = u.pow(p - 1.0).values();
    const Eigen::VectorXd up2 = u.pow(p - 2.0).values();

    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n + extra, n + extra);
    j.topLeftCorner(n, n) = op;
    j.topLeftCorner(n, n).diagonal() -= (p - 1.0) * (lambda - mu) * up2;
    const Eigen::VectorXd dlambda = (2.0 / volume) * w0 * (lu - lambda * 0.5 * p * up1);
    j.topLeftCorner(n, n).noalias() -= up1 * dlambda.transpose();
    j.block(0, n, n, 1) = up1;
    j.block(n, 0, 1, n) = p * w0 * up1.transpose();
    if (rotating) {
      j.block(0, n + 1, n, 1) = tau;
      j.block(n + 1, 0, 1, n) = w0 * tau.transpose();
    }
    const Eigen::VectorXd step = j.partialPivLu().solve(-f);
    if (!step.allFinite()) throw SingularError("Newton linearization is singular; use the reduction module");

    const double merit = f.norm();
    double s = 1.0;
    for (int h = 0;; ++h) {
      const Field trial(u.grid(), u.values() + s * step.head(n));
      const double tm = mu + s * step[n];
      const double tn = rotating ? nu + s * step[n + 1] : 0.0;
      if (trial.min() > 0.0 && (system(trial, tm, tn).norm() < merit || h >= 10)) {
        if (trial.min() <= 0.0) throw NumericalError("Newton iterate lost positivity");
        u = trial;
        mu = tm;
        nu = tn;
        break;
      }
      if (h >= 10) throw NumericalError("Newton iterate lost positivity");
      s *= 0.5;
    }
    const Field un = normalize_volume(man, u);
    res = sup_norm(el_residual(man, un));
    if (res < opts.residual_tol) {
      CriticalPoint cp = classify_point(man, un, opts.kernel_tol);
      cp.newton_iterations = it;
      return cp;
    }
    if (!std::isfinite(res) || res > 1e6) throw ConvergenceError("Newton diverged");
  }
  std::ostringstream msg;
  msg << "Newton did not reach residual " << opts.residual_tol << " in " << opts.newton_max_iter
      << " steps (last residual " << res << ")";
  throw ConvergenceError(msg.str());
}

CriticalPoint minimize(const Manifold& man, const Field& u0, const SolverOptions& opts, std::vector<double>* history) {
  require_positive(u0, "initial guess");
  Field u = normalize_volume(man, u0);
  double q = yamabe_energy(man, u);
  if (history) history->push_back(q);
  int it = 0;
  for (;; ++it) {
    if (l2_norm(gradient(man, u)) < opts.gradient_tol) break;
    if (it >= opts.max_iter) {
      std::ostringstream msg;
      msg << "descent did not converge in " << opts.max_iter << " iterations (gradient "
          << l2_norm(gradient(man, u)) << ", Q " << q << ")";
      throw ConvergenceError(msg.str());
    }
    const Field r = el_residual(man, u);
    Field d = -precondition(man, r);
    double slope = 2.0 * l2_inner(r, d);
    if (!(slope < 0.0)) {
      d = -r;
      slope = -2.0 * l2_inner(r, r);
    }
    double s = 1.0;
    bool accepted = false;
    bool positivity = false;
    for (int h = 0; h <= opts.max_halvings; ++h, s *= 0.5) {
      const Field trial = u + s * d;
      if (trial.min() <= 0.0) {
        positivity = true;
        continue;
      }
      positivity = false;
      const double qt = yamabe_energy(man, trial);
      if (qt <= q + opts.armijo * s * slope) {
        u = normalize_volume(man, trial);
        q = qt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (positivity) throw NumericalError("descent step lost positivity after maximal step halving");
      break;  // no further decrease is resolvable in floating point
    }
    if (history) history->push_back(q);
  }

  const double res = sup_norm(el_residual(man, u));
  if (!opts.polish || res < opts.residual_tol) {
    CriticalPoint cp = classify_point(man, u, opts.kernel_tol);
    cp.descent_iterations = it;
    return cp;
  }
  try {
    CriticalPoint polished = newton_critical_point(man, u, opts);
    polished.descent_iterations = it;
    return polished;
  } catch (const SingularError&) {
    std::ostringstream msg;
    msg << "descent stopped at a degenerate point with residual " << res
        << " and the Newton polish is singular there";
    throw ConvergenceError(msg.str());
  }
}

double MinimizerSearch::y_ref() const {
  if (points.empty()) throw DomainError("no critical points found");
  return points.front().q;
}

MinimizerSearch find_minimizers(const Manifold& man, int grid_size, int starts, std::uint64_t seed,
                                const SolverOptions& opts) {
  MinimizerSearch out;
  const CriticalPoint c = constant_point(man, grid_size, opts.kernel_tol);
  out.points.push_back(c);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
  const double level = c.u[0];
  for (int s = 0; s < starts; ++s) {
    const double phase = phase_dist(rng);
    const Field u0 = Field::from_function(c.u.grid(), [&](double t) { return level + 0.1 * std::cos(t - phase); });
    ++out.starts;
    CriticalPoint cp{u0};
    try {
      cp = minimize(man, u0, opts);
    } catch (const std::exception& e) {
      out.failures.push_back(e.what());
      continue;
    }
    std::vector<Field> known;
    for (const CriticalPoint& k : out.points) known.push_back(k.u);
    if (distance_to_set(cp.u, known) > 1e-6) out.points.push_back(std::move(cp));
  }
  std::sort(out.points.begin(), out.points.end(), [](const CriticalPoint& a, const CriticalPoint& b) { return a.q < b.q; });
  return out;
}

BifurcationDiagram continuation(int n, double l_min, double l_max, int steps, int grid_size, std::uint64_t seed,
                                const SolverOptions& opts, bool search_nonconstant) {
  if (!(l_min > 0.0) || !(l_max > l_min) || steps < 2) throw DomainError("continuation needs 0 < L_min < L_max and steps >= 2");
  BifurcationDiagram out;
  out.dimension = n;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < steps; ++i) {
    const double l = l_min + (l_max - l_min) * i / (steps - 1);
    const Manifold man = make_product_manifold(n, l);
    const GridPtr grid = man.make_grid(grid_size);
    const Field c = Field::constant(grid, std::pow(man.volume, -1.0 / man.critical_exponent));
    const Spectrum s = hessian_spectrum(man, c, opts.kernel_tol);
    BifurcationRow row;
    row.length = l;
    row.eig0 = s.eigenvalues[0];
    row.eig1 = s.eigenvalues[1];
    row.q_constant = yamabe_energy(man, c);
    const double phase = phase_dist(rng);
    if (search_nonconstant) {
      try {
        const Field u0 = Field::from_function(grid, [&](double t) { return c[0] + 0.1 * std::cos(t - phase); });
        const CriticalPoint cp = minimize(man, u0, opts);
        if (cp.branch == "nonconstant") {
          row.q_nonconstant = cp.q;
        } else {
          row.note = "descent returned to the constant";
        }
      } catch (const std::exception& e) {
        row.note = e.what();
      }
    }
    out.rows.push_back(row);
  }
  return out;
}

std::optional<double> kernel_onset(const BifurcationDiagram& diagram) {
  const auto& r = diagram.rows;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double a = r[i].eig0;
    const double b = r[i + 1].eig0;
    if (a == 0.0) return r[i].length;
    if ((a > 0.0) != (b > 0.0) || b == 0.0) {
      return r[i].length + (r[i + 1].length - r[i].length) * a / (a - b);
    }
  }
  return std::nullopt;
}

}  // namespace yamabe
