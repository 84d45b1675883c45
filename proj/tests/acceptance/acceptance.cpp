// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "yamabe/energy.hpp"
#include "yamabe/hessian.hpp"
#include "yamabe/reduction.hpp"
#include "yamabe/solver.hpp"
#include "yamabe/stability.hpp"

using namespace yamabe;

namespace {

constexpr int kGrid = 256;
constexpr int kReductionGrid = 128;
constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double sup(const Field& f) { return f.values().cwiseAbs().maxCoeff(); }

// Shared degenerate setting: constant factor at n = 3, L = 1.
struct Degenerate {
  Manifold man = make_product_manifold(3, 1.0);
  Field v = constant_point(man, kReductionGrid).u;
  Spectrum spectrum = hessian_spectrum(man, v);
  GraphMap map{man, v, spectrum.kernel_basis()};
  double fit_seconds = 0.0;
  ReducedModel model = [this] {
    Stopwatch sw;
    ReducedModel m = taylor_of_q(man, v, map.kernel());
    fit_seconds = sw.seconds();
    return m;
  }();
};

const Degenerate& degenerate() {
  static const Degenerate d;
  return d;
}

Outcome kernel_onset_criterion() {
  Stopwatch sw;
  const BifurcationDiagram d = continuation(3, 0.8, 1.2, 41, kGrid, kSeed);
  const double t = sw.seconds();
  const auto onset = kernel_onset(d);
  if (!onset) return {false, "no sign change of the smallest eigenvalue"};
  const double err = std::abs(*onset - 1.0);
  return {err <= 1e-3 && t < 10.0, fmt("onset L=%.6f |err|=%.2e, %.2fs (limit 10s)", *onset, err, t)};
}

Outcome quadratic_stability_criterion() {
  Stopwatch sw;
  const Manifold man = make_product_manifold(3, 0.8);
  const MinimizerSearch ms = find_minimizers(man, kGrid, 2, kSeed);
  const Field& v = ms.points.front().u;
  std::vector<Field> minimizers;
  for (const CriticalPoint& p : ms.points) {
    if (p.q - ms.y_ref() <= 1e-10 * std::abs(ms.y_ref())) minimizers.push_back(p.u);
  }
  std::mt19937_64 rng(kSeed);
  std::vector<Direction> dirs;
  int i = 0;
  for (const Field& f : random_tangent_fields(man, v, 6, 8, rng)) {
    dirs.push_back(linear_direction(man, v, f, "random" + std::to_string(i++)));
  }
  const SampleSet set = sample_deficit_distance(man, minimizers, ms.y_ref(), dirs, log_spaced(1e-3, 5e-2, 12));
  const StabilityFit fit = fit_exponent(set.samples, {1e-3, 5e-2});
  const double t = sw.seconds();
  const bool ok = std::abs(fit.slope - 2.0) <= 0.05 && fit.r2 > 0.99 && t < 30.0;
  return {ok, fmt("slope=%.4f r2=%.5f samples=%zu, %.2fs (limit 30s)", fit.slope, fit.r2, fit.samples.size(), t)};
}

Outcome superquadratic_criterion() {
  Stopwatch sw;
  const Degenerate& d = degenerate();
  const SuperquadraticFamily fam = superquadratic_family(d.map, d.model, log_spaced(0.005, 0.05, 10));
  const double t = sw.seconds() + d.fit_seconds;
  // Ratio for gamma = 1.5, ordered from the largest t down to the smallest.
  std::size_t g = 0;
  while (g < fam.gammas.size() && fam.gammas[g] != 1.5) ++g;
  if (g == fam.gammas.size()) return {false, "gamma 1.5 missing from the ratio table"};
  std::vector<double> ratio;
  for (auto it = fam.rows.rbegin(); it != fam.rows.rend(); ++it) ratio.push_back(it->ratios[g]);
  bool monotone = true;
  for (std::size_t i = 1; i < ratio.size(); ++i) monotone = monotone && ratio[i] < ratio[i - 1];
  const double drop = ratio.back() / ratio.front();
  const bool ok = fam.slope >= 3.5 && monotone && drop < 0.1 && t < 120.0;
  return {ok, fmt("slope=%.4f ratio(3.5) %s, last/first=%.4f (need < 0.1), %.2fs (limit 120s)", fam.slope,
                  monotone ? "decreasing" : "NOT decreasing", drop, t)};
}

Outcome reduction_criterion() {
  const Degenerate& d = degenerate();
  const GraphMap& map = d.map;
  const int l = map.dimension();
  std::vector<double> residuals;
  const auto lift = [&](const Eigen::VectorXd& x) {
    const Lift f = map.solve(x);
    residuals.push_back(map.projected_residual(f.point));
    return f;
  };

  const double f0 = sup(lift(Eigen::VectorXd::Zero(l)).correction);

  const double h = 1e-4;
  double dnorm = 0.0;
  for (int i = 0; i < l; ++i) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(l);
    x[i] = h;
    const Field df = (lift(x).correction - lift(-x).correction) / (2 * h);
    dnorm = std::max(dnorm, w12_norm(df));
  }

  std::mt19937_64 rng(kSeed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> radius(0.03, 0.09);
  const double step = 1e-3;
  double grad_err = 0.0;
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd x(l);
    for (int i = 0; i < l; ++i) x[i] = normal(rng);
    x *= radius(rng) / x.norm();
    const Lift at = lift(x);
    // Projected full gradient at the lift, in kernel coordinates.
    const Field grad = gradient_in_frame(d.man, at.point, d.v);
    Eigen::VectorXd g(l);
    for (int i = 0; i < l; ++i) g[i] = l2_inner(grad, map.kernel()[i]);
    Eigen::VectorXd fd(l);
    for (int i = 0; i < l; ++i) {
      fd[i] = oracle::five_point1(
          [&](double s) {
            Eigen::VectorXd y = x;
            y[i] += s;
            const Lift f = lift(y);
            return yamabe_energy(d.man, f.point);
          },
          0.0, step);
    }
    grad_err = std::max(grad_err, (fd - g).norm() / g.norm());
  }
  double worst = 0.0;
  for (double r : residuals) worst = std::max(worst, r);
  const bool ok = f0 <= 1e-12 && dnorm < 1e-6 && worst < 1e-10 && grad_err <= 1e-7;
  return {ok, fmt("|F(0)|=%.1e |dF(0)|=%.2e max residual=%.2e over %zu lifts, grad q rel err=%.2e", f0, dnorm, worst,
                  residuals.size(), grad_err)};
}

Outcome taylor_criterion() {
  const Degenerate& d = degenerate();
  const ReducedModel& m = d.model;
  const auto norm = [&](int j) { return m.degree(j) ? m.degree(j)->norm : std::nan(""); };
  const std::string verdict = to_string(classify_integrability(m, 1e-6));
  const bool ok = norm(2) < 1e-6 && norm(3) < 1e-6 && norm(4) > 1e-3 && verdict == "nonintegrable";
  return {ok, fmt("|q2|=%.2e |q3|=%.2e |q4|=%.4f p=%d verdict=%s, fit %.2fs", norm(2), norm(3), norm(4),
                  m.p_min ? *m.p_min : -1, verdict.c_str(), d.fit_seconds)};
}

Outcome lojasiewicz_criterion() {
  const LojasiewiczResult quad = lojasiewicz_check(Polynomial::radial(2, 1), 0.1, 201);
  const LojasiewiczResult quart = lojasiewicz_check(Polynomial::radial(2, 2), 0.1, 201);
  const Degenerate& d = degenerate();
  const LojasiewiczResult fitted = lojasiewicz_check(d.model.polynomial, 0.1, 201);
  const double p = d.model.p_min ? *d.model.p_min : std::nan("");
  const bool ok = std::abs(quad.exponent - 2.0) <= 0.05 && std::abs(quart.exponent - 4.0) <= 0.05 &&
                  std::abs(fitted.gamma_star - 2.0) <= 0.1 && std::abs(fitted.gamma_star - (p - 2.0)) <= 0.1;
  return {ok, fmt("|x|^2 -> %.4f, |x|^4 -> %.4f, fitted q gamma*=%.4f (p-2=%.0f)", quad.exponent, quart.exponent,
                  fitted.gamma_star, p - 2.0)};
}

// Errors of a central difference against an exact value at h = 1e-3, 1e-4.
struct Ratio {
  double coarse = 0.0;
  double fine = 0.0;
  double ratio() const { return coarse / fine; }
  bool quadratic() const { return ratio() >= 50.0 && ratio() <= 200.0; }
};

Ratio central_errors(const std::function<double(double)>& f, double exact) {
  Ratio r;
  r.coarse = std::abs(oracle::central1(f, 0.0, 1e-3) - exact);
  r.fine = std::abs(oracle::central1(f, 0.0, 1e-4) - exact);
  return r;
}

Outcome variational_criterion() {
  // Gradient: Q along the volume-normalised line through a generic point.
  const Manifold m11 = make_product_manifold(3, 1.1);
  const auto g = m11.make_grid(kGrid);
  const Field u = normalize_volume(m11, Field::from_function(g, [](double t) {
    return 1.0 + 0.3 * std::cos(t) + 0.1 * std::sin(2 * t) + 0.05 * std::cos(4 * t);
  }));
  const Field phi = tangent_project(m11, u, Field::from_function(g, [](double t) {
    return std::sin(t) + 0.8 * std::cos(3 * t) + 0.3;
  }));
  const Ratio grad = central_errors(
      [&](double h) { return yamabe_energy(m11, normalize_volume(m11, u + h * phi)); },
      l2_inner(gradient(m11, u), phi));

  // Hessian: at critical points, differentiate the exact first variation.
  bool hess_ok = true;
  std::string hess_detail;
  for (double len : {0.8, 1.2}) {
    const Manifold m = make_product_manifold(3, len);
    const Field v = constant_point(m, kGrid).u;
    const Field psi = tangent_project(m, v, Field::from_function(v.grid(), [](double t) {
      return std::cos(t) + 0.5 * std::sin(2 * t) + 0.2 * std::cos(3 * t);
    }));
    const Ratio r = central_errors([&](double h) { return l2_inner(full_gradient(m, v + h * psi), psi); },
                                   2.0 * l2_inner(hessian_apply(m, v, psi), psi));
    hess_ok = hess_ok && r.quadratic();
    hess_detail += fmt(" L=%.1f:%.1f", len, r.ratio());
  }

  const Manifold m1 = make_product_manifold(3, 1.0);
  const double el = sup(el_residual(m1, constant_point(m1, kGrid).u));

  double eig_err = 0.0;
  for (double len : {0.8, 1.0, 1.2}) {
    const Manifold m = make_product_manifold(3, len);
    const Spectrum s = hessian_spectrum(m, constant_point(m, kGrid).u);
    std::vector<double> expected;
    for (int k = 1; k < kGrid / 2; ++k) expected.insert(expected.end(), 2, oracle::mode_value(m, k));
    expected.push_back(oracle::mode_value(m, kGrid / 2));
    std::sort(expected.begin(), expected.end());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      eig_err = std::max(eig_err, std::abs(s.eigenvalues[i] - expected[i]) / std::max(1.0, std::abs(expected[i])));
    }
  }
  const bool ok = grad.quadratic() && hess_ok && el < 1e-12 && eig_err <= 1e-8;
  return {ok, fmt("gradient error ratio %.1f, hessian ratios", grad.ratio()) + hess_detail +
                  fmt(", EL residual %.1e, eigenvalue rel err %.1e", el, eig_err)};
}

Outcome conformal_criterion() {
  std::mt19937_64 rng(kSeed);
  std::normal_distribution<double> normal;
  const Manifold man = make_product_manifold(3, 0.8);
  const auto g = man.make_grid(kGrid);
  const auto random_smooth = [&](double amp) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(kGrid);
    for (int k = 1; k <= 6; ++k) {
      c[2 * k - 1] = amp * normal(rng) / (k * k);
      c[2 * k] = amp * normal(rng) / (k * k);
    }
    return Field::from_coefficients(g, c);
  };
  const Field v = constant_point(man, kGrid).u;
  const double y = yamabe_energy(man, v);
  const ConformalRepresentative minimizer(man, v);
  double rep_err = std::abs(minimizer.volume() - 1.0) + sup(minimizer.scalar_curvature() - Field::constant(g, y)) / y;

  double norm_err = 0.0, star_err = 0.0, law_err = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Field u1 = v + random_smooth(0.05);
    const Field u2 = v + random_smooth(0.05);
    const Field w = u1 - u2;
    const double d = conformal_distance(man, u1, u2);
    // ||.||_* in the minimizer representative, where the scalar curvature is Y.
    const Field wm = w / v;
    const double star = std::sqrt(man.conformal_constant * minimizer.dirichlet(wm) + y * minimizer.integrate(wm * wm));
    star_err = std::max(star_err, std::abs(conformal_distance_star(man, u1, u2, man.scalar_curvature) - star) / star);

    const Field psi = Field::constant(g, 1.0) + random_smooth(0.3);
    const ConformalRepresentative h(man, psi);
    const Field wh = w / psi;
    const double dh = std::pow(h.integrate(wh.map([](double x) { return std::abs(x); }).pow(man.critical_exponent)),
                               1.0 / man.critical_exponent);
    const double sh = std::sqrt(man.conformal_constant * h.dirichlet(wh) + h.integrate(h.scalar_curvature() * wh * wh));
    norm_err = std::max(norm_err, std::abs(dh - d) / d);
    star_err = std::max(star_err, std::abs(sh - star) / star);

    const Field f = random_smooth(1.0) + Field::constant(g, normal(rng));
    const Field lhs = h.conformal_laplacian(f);
    const Field rhs = psi.pow(1.0 - man.critical_exponent) * conformal_laplacian(man, psi * f);
    law_err = std::max(law_err, sup(lhs - rhs) / sup(rhs));
  }
  const bool ok = rep_err < 1e-9 && norm_err <= 1e-9 && star_err <= 1e-9 && law_err <= 1e-9;
  return {ok, fmt("||.|| rel err %.1e, ||.||_* rel err %.1e, transformation law %.1e, minimizer representative %.1e",
                  norm_err, star_err, law_err, rep_err)};
}

Outcome decomposition_criterion() {
  const Degenerate& d = degenerate();
  const double y = yamabe_energy(d.man, d.v);
  const double lambda1 = w12_coercivity(d.man, d.v, d.spectrum);
  std::mt19937_64 rng(kSeed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sum_err = 0.0, slack = 1e300;
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd x(2);
    x << normal(rng), normal(rng);
    x *= 0.05 * unit(rng) / x.norm();
    Eigen::VectorXd c = Eigen::VectorXd::Zero(kReductionGrid);
    for (int m = 1; m <= 8; ++m) {
      c[2 * m - 1] = normal(rng) / m;
      c[2 * m] = normal(rng) / m;
    }
    Field perp = Field::from_coefficients(d.v.grid(), c);
    for (const Field& e : d.map.kernel()) perp -= l2_inner(perp, e) * e;
    perp = tangent_project(d.man, d.v, perp);
    const double size = std::pow(10.0, -3.0 + 1.5 * unit(rng));
    const Field u = normalize_volume(d.man, d.v + d.map.kernel_field(x) + (size / w12_norm(perp)) * perp);
    const Decomposition dec = decompose_deficit(d.map, u, y, lambda1);
    sum_err = std::max(sum_err, std::abs(dec.term_i + dec.term_ii - dec.deficit) / std::abs(dec.deficit));
    slack = std::min(slack, dec.term_i - (dec.coercive_bound - 1e-8));
  }
  const bool ok = sum_err <= 1e-8 && slack >= 0.0;
  return {ok, fmt("lambda1=%.4f, max |I+II-deficit|/deficit=%.1e, min(I - bound + 1e-8)=%.2e", lambda1, sum_err, slack)};
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"kernel onset", kernel_onset_criterion},
      {"nondegenerate quadratic stability", quadratic_stability_criterion},
      {"superquadratic growth", superquadratic_criterion},
      {"reduction correctness", reduction_criterion},
      {"taylor structure", taylor_criterion},
      {"lojasiewicz check", lojasiewicz_criterion},
      {"variational oracles", variational_criterion},
      {"conformal invariance", conformal_criterion},
      {"decomposition identity", decomposition_criterion},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name.c_str(), o.detail.c_str());
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", index - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
