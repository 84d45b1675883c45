#include "yamabe/stability.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "yamabe/energy.hpp"
#include "yamabe/errors.hpp"

namespace yamabe {

Direction linear_direction(const Manifold& man, const Field& v, const Field& phi, std::string label) {
  const double nrm = w12_norm(phi);
  if (!(nrm > 0.0)) throw DomainError("direction must be nonzero");
  const Field unit = phi / nrm;
  return {std::move(label), [man, v, unit](double t) { return normalize_volume(man, v + t * unit); }};
}

Direction lift_direction(const GraphMap& map, const Eigen::VectorXd& x, std::string label) {
  if (!(x.norm() > 0.0)) throw DomainError("direction must be nonzero");
  const Eigen::VectorXd unit = x.normalized();
  return {std::move(label), [&map, unit](double t) { return map.solve(t * unit).point; }};
}

std::vector<Field> random_tangent_fields(const Manifold& man, const Field& v, int count, int max_mode,
                                         std::mt19937_64& rng) {
  if (count < 1 || max_mode < 1 || max_mode >= v.grid()->mode_cutoff()) {
    throw DomainError("random directions need count >= 1 and 1 <= max_mode < N/2");
  }
  std::normal_distribution<double> normal;
  std::vector<Field> out;
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(v.size());
    for (int k = 1; k <= max_mode; ++k) {
      c[2 * k - 1] = normal(rng) / k;
      c[2 * k] = normal(rng) / k;
    }
    out.push_back(orthogonal_tangent_project(man, v, Field::from_coefficients(v.grid(), c)));
  }
  return out;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw DomainError("log_spaced needs 0 < lo < hi and count >= 2");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  return out;
}

SampleSet sample_deficit_distance(const Manifold& man, const std::vector<Field>& minimizers, double y_ref,
                                  const std::vector<Direction>& directions, const std::vector<double>& radii,
                                  double verify_tol) {
  if (minimizers.empty()) throw DomainError("minimizer list is empty");
  for (const Field& m : minimizers) {
    const double r = el_residual(man, m).values().cwiseAbs().maxCoeff();
    if (!(r < verify_tol)) {
      throw DomainError("minimizer is not verified: Euler-Lagrange residual " + std::to_string(r));
    }
  }
  SampleSet out;
  for (const Direction& d : directions) {
    for (double t : radii) {
      try {
        const Field u = d.path(t);
        require_positive(u);
        out.samples.push_back({d.label, t, distance_to_set(u, minimizers), yamabe_energy(man, u) - y_ref});
      } catch (const DomainError& e) {
        out.warnings.push_back(d.label + " at radius " + std::to_string(t) + " skipped: " + e.what());
      }
    }
  }
  return out;
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw NumericalError("regression abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

}  // namespace

StabilityFit fit_exponent(const std::vector<Sample>& samples, FitWindow window, double noise, int min_samples) {
  StabilityFit fit;
  fit.window = window;
  std::vector<double> lx, ly;
  for (const Sample& s : samples) {
    if (s.radius < window.lo || s.radius > window.hi) continue;
    if (!(s.deficit > 10.0 * noise) || !(s.distance > 0.0)) continue;
    fit.samples.push_back(s);
    lx.push_back(std::log(s.distance));
    ly.push_back(std::log(s.deficit));
  }
  if (static_cast<int>(lx.size()) < min_samples) {
    throw DomainError("only " + std::to_string(lx.size()) + " usable samples, need " + std::to_string(min_samples));
  }
  const LineFit f = fit_line(lx, ly);
  fit.slope = f.slope;
  fit.gamma_hat = f.slope - 2.0;
  fit.c_hat = std::exp(f.intercept);
  fit.r2 = f.r2;
  return fit;
}

SuperquadraticFamily superquadratic_family(const GraphMap& map, const ReducedModel& model,
                                           const std::vector<double>& t_values, std::vector<double> gammas) {
  if (model.nondegenerate || !model.p_min) throw DomainError("superquadratic family needs a degenerate fitted model");
  if (!model.asp_holds()) throw DomainError("AS_p does not hold for the fitted model; no maximizer direction");
  const Manifold& man = map.manifold();
  const Field& v = map.base();
  const double q0 = yamabe_energy(man, v);
  SuperquadraticFamily out;
  out.gammas = std::move(gammas);
  out.direction = model.asp_maximizer().normalized();
  std::vector<double> lx, ly;
  for (double t : t_values) {
    const Field u = t == 0.0 ? v : map.solve(t * out.direction).point;
    SuperquadraticRow row;
    row.t = t;
    row.distance = w12_norm(u - v);
    row.deficit = yamabe_energy(man, u) - q0;
    for (double g : out.gammas) {
      row.ratios.push_back(row.distance > 0.0 ? row.deficit / std::pow(row.distance, 2.0 + g)
                                              : std::numeric_limits<double>::quiet_NaN());
    }
    if (row.distance > 0.0 && row.deficit > 0.0) {
      lx.push_back(std::log(row.distance));
      ly.push_back(std::log(row.deficit));
    }
    out.rows.push_back(std::move(row));
  }
  if (lx.size() >= 2) {
    const LineFit f = fit_line(lx, ly);
    out.slope = f.slope;
    out.r2 = f.r2;
  }
  return out;
}

LojasiewiczResult lojasiewicz_check(const Polynomial& q, double radius, int grid_density) {
  const int l = q.variables();
  if (l < 1 || l > 3) throw DomainError("lojasiewicz_check supports 1 to 3 variables");
  if (!(radius > 0.0) || grid_density < 5) throw DomainError("lojasiewicz_check needs radius > 0 and density >= 5");
  const int m = grid_density;
  const double h = 2.0 * radius / (m - 1);
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(l);
  const double q0 = q(origin);

  // Enumerate the grid; index -1 marks points outside the ball.
  int total = 1;
  for (int i = 0; i < l; ++i) total *= m;
  std::vector<Eigen::VectorXd> pts;
  std::vector<int> slot(total, -1);
  std::vector<int> coords(l);
  auto decode = [&](int idx) {
    for (int i = 0; i < l; ++i) {
      coords[i] = idx % m;
      idx /= m;
    }
  };
  for (int idx = 0; idx < total; ++idx) {
    decode(idx);
    Eigen::VectorXd x(l);
    for (int i = 0; i < l; ++i) x[i] = -radius + h * coords[i];
    if (x.norm() <= radius * (1.0 + 1e-12)) {
      slot[idx] = static_cast<int>(pts.size());
      pts.push_back(x);
    }
  }
  std::vector<double> gnorm(pts.size());
  double gscale = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    gnorm[k] = q.gradient(pts[k]).norm();
    gscale = std::max(gscale, gnorm[k]);
  }

  LojasiewiczResult out;
  out.grid_points = static_cast<int>(pts.size());
  out.critical_points.push_back(origin);
  auto add_critical = [&](const Eigen::VectorXd& x) {
    for (const auto& c : out.critical_points) {
      if ((c - x).norm() < 0.5 * h) return;
    }
    out.critical_points.push_back(x);
  };

  // Local minima of |grad q| over grid neighbours, refined by Newton.
  for (int idx = 0; idx < total; ++idx) {
    if (slot[idx] < 0) continue;
    decode(idx);
    const double here = gnorm[slot[idx]];
    bool is_min = true;
    for (int i = 0; i < l && is_min; ++i) {
      for (int s : {-1, 1}) {
        const int c = coords[i] + s;
        if (c < 0 || c >= m) continue;
        int stride = 1;
        for (int k = 0; k < i; ++k) stride *= m;
        const int nb = slot[idx + s * stride];
        if (nb >= 0 && gnorm[nb] < here) {
          is_min = false;
          break;
        }
      }
    }
    if (!is_min) continue;
    Eigen::VectorXd x = pts[slot[idx]];
    for (int it = 0; it < 300; ++it) {
      const Eigen::VectorXd g = q.gradient(x);
      if (g.norm() < 1e-300) break;
      x -= q.hessian(x).completeOrthogonalDecomposition().solve(g);
    }
    if (x.allFinite() && x.norm() <= radius && q.gradient(x).norm() <= 1e-10 * std::max(1.0, gscale)) add_critical(x);
  }

  auto distance = [&](const Eigen::VectorXd& x) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& c : out.critical_points) d = std::min(d, (x - c).norm());
    return d;
  };

  // Smallest |q - q0| on logarithmic distance shells.
  const int bins = 12;
  const double d_lo = 2.0 * h;
  const double d_hi = radius;
  std::vector<double> best_val(bins, std::numeric_limits<double>::infinity());
  std::vector<double> best_d(bins, 0.0);
  std::vector<double> dist(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    dist[k] = distance(pts[k]);
    if (dist[k] < d_lo || dist[k] > d_hi) continue;
    const int b = std::min(bins - 1, static_cast<int>(bins * std::log(dist[k] / d_lo) / std::log(d_hi / d_lo)));
    const double val = std::abs(q(pts[k]) - q0);
    if (val < best_val[b]) {
      best_val[b] = val;
      best_d[b] = dist[k];
    }
  }
  std::vector<double> lx, ly;
  for (int b = 0; b < bins; ++b) {
    if (best_d[b] > 0.0 && best_val[b] > 0.0 && std::isfinite(best_val[b])) {
      lx.push_back(std::log(best_d[b]));
      ly.push_back(std::log(best_val[b]));
    }
  }
  if (lx.size() < 2) throw NumericalError("lojasiewicz_check: too few populated distance shells");
  const LineFit f = fit_line(lx, ly);
  out.exponent = f.slope;
  out.gamma_star = f.slope - 2.0;
  out.r2 = f.r2;

  out.c_star = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (dist[k] < 0.5 * h) continue;
    out.c_star = std::min(out.c_star, std::abs(q(pts[k]) - q0) / std::pow(dist[k], out.exponent));
  }
  return out;
}

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  if (count < 1) throw DomainError("quadrature needs at least one node");
  nodes.assign(count, 0.0);
  weights.assign(count, 0.0);
  for (int i = 0; i < count; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = 0.5 * (1.0 - x);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

Decomposition decompose_deficit(const GraphMap& map, const Field& u, double y_ref, double lambda1,
                                int quadrature_nodes) {
  const Manifold& man = map.manifold();
  Decomposition d;
  d.x = map.coordinates(u);
  const Field ul = map.solve(d.x).point;
  const Field w = u - ul;
  std::vector<double> nodes, weights;
  gauss_legendre(quadrature_nodes, nodes, weights);
  for (int i = 0; i < quadrature_nodes; ++i) {
    d.term_i += weights[i] * l2_inner(full_gradient(man, ul + nodes[i] * w), w);
  }
  d.term_ii = yamabe_energy(man, ul) - y_ref;
  d.deficit = yamabe_energy(man, u) - y_ref;
  d.perp_w12 = w12_norm(w);
  d.coercive_bound = 0.25 * lambda1 * d.perp_w12 * d.perp_w12;
  return d;
}

}  // namespace yamabe
