#include "yamabe/reduction.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "yamabe/energy.hpp"
#include "yamabe/errors.hpp"

namespace yamabe {

namespace {

std::vector<Field> orthonormal_tangent(const Manifold& man, const Field& v, const std::vector<Field>& in) {
  std::vector<Field> out;
  for (const Field& f : in) {
    require_same_grid(v, f);
    Field g = orthogonal_tangent_project(man, v, f);
    for (const Field& e : out) g -= l2_inner(e, g) * e;
    const double nrm = l2_norm(g);
    if (!(nrm > 1e-12 * std::max(1.0, l2_norm(f)))) throw DomainError("kernel basis is linearly dependent");
    out.push_back(g / nrm);
  }
  return out;
}

}  // namespace

GraphMap::GraphMap(Manifold man, Field base, const std::vector<Field>& kernel, GraphMapOptions opts)
    : man_(std::move(man)), base_(std::move(base)), opts_(opts) {
  require_positive(base_, "base point");
  if (!(opts_.tolerance > 0.0) || opts_.max_iter < 1 || !(opts_.radius > 0.0)) {
    throw DomainError("graph map options must be positive");
  }
  kernel_ = orthonormal_tangent(man_, base_, kernel);
  const int n = base_.size();
  const int l = dimension();
  const double sqrt_w = std::sqrt(base_.grid()->weight());
  if (l == 0) {
    perp_ = Eigen::MatrixXd::Identity(n, n) / sqrt_w;
    return;
  }
  Eigen::MatrixXd k(n, l);
  for (int i = 0; i < l; ++i) k.col(i) = kernel_[i].values() * sqrt_w;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(k);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  perp_ = q.rightCols(n - l) / sqrt_w;
}

Field GraphMap::kernel_field(const Eigen::VectorXd& x) const {
  if (x.size() != dimension()) throw DomainError("kernel coordinate vector has the wrong dimension");
  Field phi = Field::constant(base_.grid(), 0.0);
  for (int i = 0; i < dimension(); ++i) phi += x[i] * kernel_[i];
  return phi;
}

Eigen::VectorXd GraphMap::coordinates(const Field& u) const {
  const Field d = u - base_;
  Eigen::VectorXd x(dimension());
  for (int i = 0; i < dimension(); ++i) x[i] = l2_inner(kernel_[i], d);
  return x;
}

double GraphMap::projected_residual(const Field& u) const {
  Field g = gradient_in_frame(man_, u, base_);
  for (const Field& e : kernel_) g -= l2_inner(e, g) * e;
  return l2_norm(g);
}

Lift GraphMap::solve(const Eigen::VectorXd& x) const {
  if (x.size() != dimension()) throw DomainError("kernel coordinate vector has the wrong dimension");
  if (x.norm() > opts_.radius * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "|x| = " << x.norm() << " exceeds the trust radius " << opts_.radius;
    throw DomainError(msg.str());
  }
  const int n = base_.size();
  const int l = dimension();
  const int m = static_cast<int>(perp_.cols());
  const double p = man_.critical_exponent;
  const double w0 = base_.grid()->weight();
  const Field anchor = base_ + kernel_field(x);

  Eigen::MatrixXd kn(n, l);
  for (int i = 0; i < l; ++i) kn.col(i) = kernel_[i].values();
  Eigen::MatrixXd op = -man_.conformal_constant * laplacian_matrix(*base_.grid());
  op.diagonal().array() += man_.scalar_curvature;

  Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(l);
  double beta = 0.0;
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;

  for (int it = 0;; ++it) {
    const Field u = anchor + Field(base_.grid(), perp_ * a);
    require_positive(u, "lifted point");
    const double energy = total_energy(man_, u);
    const double volume = volume_integral(man_, u);
    const double lambda = energy / volume;
    const Eigen::VectorXd lu = conformal_laplacian(man_, u).values();
    const Eigen::VectorXd up1 = u.pow(p - 1.0).values();
    const Eigen::VectorXd up2 = u.pow(p - 2.0).values();

    const double residual = projected_residual(u);
    const double volume_defect = volume - 1.0;
    if (residual < opts_.tolerance && std::abs(volume_defect) < 1e-13) {
      Lift out{x, u, Field(base_.grid(), perp_ * a), Eigen::VectorXd(l), residual, it};
      const Field g = gradient_in_frame(man_, u, base_);
      for (int i = 0; i < l; ++i) out.multipliers[i] = 0.5 * l2_inner(kernel_[i], g);
      return out;
    }
    if (it >= opts_.max_iter) {
      throw ConvergenceError("graph map Newton did not converge in " + std::to_string(opts_.max_iter) +
                             " steps (residual " + std::to_string(residual) + "); try a smaller |x|");
    }

    const Eigen::VectorXd g = lu - (lambda + beta) * up1 - kn * c;
    const double merit = g.norm() + std::abs(volume_defect);
    if (merit < best) {
      best = merit;
      stalled = 0;
    } else if (++stalled >= 3) {
      throw ConvergenceError("graph map Newton stopped decreasing (residual " + std::to_string(residual) +
                             "); try a smaller |x|");
    }

    // Jacobian of u -> L u - (E/V) u^{p-1} - beta u^{p-1}.
    Eigen::MatrixXd jg = op;
    jg.diagonal() -= (p - 1.0) * (lambda + beta) * up2;
    const Eigen::VectorXd dlambda = (2.0 / volume) * w0 * (lu - lambda * 0.5 * p * up1);
    jg.noalias() -= up1 * dlambda.transpose();

    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n + 1, m + l + 1);
    j.topLeftCorner(n, m) = jg * perp_;
    j.block(0, m, n, l) = -kn;
    j.block(0, m + l, n, 1) = -up1;
    j.block(n, 0, 1, m) = p * w0 * up1.transpose() * perp_;
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = -g;
    rhs[n] = -volume_defect;

    const Eigen::VectorXd step = j.partialPivLu().solve(rhs);
    if (!step.allFinite()) throw NumericalError("graph map Jacobian is singular");
    a += step.head(m);
    c += step.segment(m, l);
    beta += step[m + l];
  }
}

double GraphMap::reduced_energy(const Eigen::VectorXd& x) const { return yamabe_energy(man_, solve(x).point); }

Eigen::VectorXd GraphMap::reduced_gradient(const Eigen::VectorXd& x) const { return 2.0 * solve(x).multipliers; }

Lift solve_graph_map(const Manifold& man, const Field& v, const std::vector<Field>& kernel,
                     const Eigen::VectorXd& x, GraphMapOptions opts) {
  return GraphMap(man, v, kernel, opts).solve(x);
}

const DegreeFit* ReducedModel::degree(int j) const {
  for (const DegreeFit& d : degrees) {
    if (d.degree == j) return &d;
  }
  return nullptr;
}

Eigen::VectorXd ReducedModel::asp_maximizer() const {
  if (asp.empty()) return {};
  return asp.front().maximizer;
}

namespace {

std::vector<Eigen::VectorXd> sphere_directions(int dim, int count, std::uint64_t seed) {
  std::vector<Eigen::VectorXd> out;
  if (dim == 1) {
    for (int i = 0; i < count; ++i) out.push_back(Eigen::VectorXd::Constant(1, i % 2 == 0 ? 1.0 : -1.0));
    return out;
  }
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      const double a = 2.0 * std::numbers::pi * (i + 0.25) / count;
      out.push_back(Eigen::Vector2d(std::cos(a), std::sin(a)));
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd d(dim);
    for (int k = 0; k < dim; ++k) d[k] = normal(rng);
    out.push_back(d.normalized());
  }
  return out;
}

}  // namespace

ReducedModel taylor_of_q(const Manifold& man, const Field& v, const std::vector<Field>& kernel,
                         const TaylorOptions& opts) {
  ReducedModel model{.base = v, .q0 = yamabe_energy(man, v)};
  if (kernel.empty()) {
    model.nondegenerate = true;
    return model;
  }
  if (opts.j_max < 2 || opts.radii.empty()) throw DomainError("taylor fit needs j_max >= 2 and at least one radius");
  GraphMapOptions gopts = opts.graph;
  const double r_max = *std::max_element(opts.radii.begin(), opts.radii.end());
  gopts.radius = std::max(gopts.radius, r_max);
  const GraphMap map(man, v, kernel, gopts);
  model.kernel = map.kernel();
  const int l = map.dimension();
  model.polynomial = Polynomial(l);

  std::vector<Exponent> exps;
  std::vector<int> degree_of;
  for (int j = 2; j <= opts.j_max; ++j) {
    for (const Exponent& e : monomials(l, j)) {
      exps.push_back(e);
      degree_of.push_back(j);
    }
  }
  const int ncoef = static_cast<int>(exps.size());
  const int nr = static_cast<int>(opts.radii.size());
  const int per_radius = std::max(2, (3 * ncoef + nr - 1) / nr);
  const auto dirs = sphere_directions(l, per_radius, 0x5eedULL);

  std::vector<Eigen::VectorXd> points;
  std::vector<double> values;
  for (double r : opts.radii) {
    for (const Eigen::VectorXd& d : dirs) {
      const Eigen::VectorXd x = r * d;
      points.push_back(x);
      values.push_back(map.reduced_energy(x) - model.q0);
    }
  }
  const int ns = static_cast<int>(points.size());
  model.sample_count = ns;

  Eigen::MatrixXd a(ns, ncoef);
  Eigen::VectorXd b(ns);
  for (int s = 0; s < ns; ++s) {
    for (int k = 0; k < ncoef; ++k) {
      a(s, k) = monomial_value(exps[k], points[s] / r_max);
    }
    b[s] = values[s];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  model.condition_number = sv[0] / sv[sv.size() - 1];
  if (!(model.condition_number <= opts.max_condition)) {
    std::ostringstream msg;
    msg << "taylor fit is ill-conditioned (condition number " << model.condition_number << "); choose different radii";
    throw NumericalError(msg.str());
  }
  const Eigen::VectorXd scaled = svd.solve(b);
  const double rss = (a * scaled - b).squaredNorm();
  model.fit_rms = std::sqrt(rss / ns);
  const double sigma2 = ns > ncoef ? rss / (ns - ncoef) : 0.0;
  const Eigen::MatrixXd vs = svd.matrixV() * sv.cwiseInverse().asDiagonal();
  const Eigen::VectorXd var = sigma2 * vs.rowwise().squaredNorm();

  for (int j = 2; j <= opts.j_max; ++j) {
    DegreeFit fit;
    fit.degree = j;
    double se2 = 0.0;
    const double unscale = std::pow(r_max, -j);
    for (int k = 0; k < ncoef; ++k) {
      if (degree_of[k] != j) continue;
      const double coef = scaled[k] * unscale;
      fit.exponents.push_back(exps[k]);
      fit.coefficients.push_back(coef);
      model.polynomial.add(exps[k], coef);
      se2 += var[k] * unscale * unscale * tensor_weight(exps[k]);
    }
    fit.norm = model.polynomial.degree_norm(j);
    fit.threshold = std::max(opts.noise_floor, 10.0 * std::sqrt(se2));
    fit.significant = fit.norm > fit.threshold;
    model.degrees.push_back(fit);
  }

  for (std::size_t i = 0; i < model.degrees.size(); ++i) {
    if (!model.degrees[i].significant) continue;
    model.p_min = model.p_max = model.degrees[i].degree;
    if (model.degrees[i].norm < 10.0 * model.degrees[i].threshold) {
      for (std::size_t k = i + 1; k < model.degrees.size(); ++k) {
        if (model.degrees[k].significant) {
          model.p_max = model.degrees[k].degree;
          break;
        }
      }
    }
    break;
  }
  if (model.p_min) {
    for (int j : {*model.p_min, *model.p_max}) {
      if (!model.asp.empty() && model.asp.back().degree == j) continue;
      model.asp.push_back(check_asp(model.polynomial.homogeneous_part(j), j, model.degree(j)->threshold));
    }
  }
  return model;
}

AspResult check_asp(const Polynomial& part, int degree, double threshold) {
  const int l = part.variables();
  if (l < 1) throw DomainError("AS_p check needs a nonempty kernel");
  const int count = l == 1 ? 2 : (l == 2 ? 720 : 2000 * l);
  const auto dirs = sphere_directions(l, count, 0xa5ULL);
  Eigen::VectorXd best = dirs.front();
  double best_value = part(best);
  for (const Eigen::VectorXd& d : dirs) {
    const double val = part(d);
    if (val > best_value) {
      best_value = val;
      best = d;
    }
  }
  // Projected gradient ascent on the sphere.
  double step = 0.1;
  for (int it = 0; it < 200 && l > 1 && step > 1e-14; ++it) {
    Eigen::VectorXd g = part.gradient(best);
    g -= g.dot(best) * best;
    if (g.norm() < 1e-15) break;
    const Eigen::VectorXd trial = (best + step * g).normalized();
    const double val = part(trial);
    if (val > best_value) {
      best = trial;
      best_value = val;
      step *= 1.5;
    } else {
      step *= 0.5;
    }
  }
  return AspResult{degree, best_value > threshold, best_value, best};
}

AspResult check_asp(const ReducedModel& model) {
  if (!model.p_min) throw DomainError("reduced model has no integrability order");
  const int p = *model.p_min;
  return check_asp(model.polynomial.homogeneous_part(p), p, model.degree(p)->threshold);
}

Integrability classify_integrability(const ReducedModel& model, double tol) {
  if (model.nondegenerate || model.kernel.empty()) return Integrability::nondegenerate;
  for (const DegreeFit& d : model.degrees) {
    if (d.norm >= tol) return Integrability::nonintegrable;
  }
  return Integrability::integrable;
}

std::string to_string(Integrability verdict) {
  switch (verdict) {
    case Integrability::nondegenerate: return "nondegenerate";
    case Integrability::integrable: return "integrable";
    case Integrability::nonintegrable: return "nonintegrable";
  }
  return "unknown";
}

}  // namespace yamabe
