#include "yamabe/serialize.hpp"

namespace yamabe {

using nlohmann::json;

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

void to_json(json& j, const Manifold& m) {
  j = {{"n", m.dimension},           {"L", m.circle_length},       {"R_g", m.scalar_curvature},
       {"c_n", m.conformal_constant}, {"p_star", m.critical_exponent}, {"vol_g", m.volume},
       {"critical_length", m.critical_length()}};
}

void to_json(json& j, const EnergyReport& r) {
  j = {{"q", r.q}, {"lambda", r.lambda}, {"deficit", r.deficit}, {"el_residual_sup", r.el_residual_sup}};
}

void to_json(json& j, const Spectrum& s) {
  j = {{"eigenvalues", s.eigenvalues},
       {"kernel_dimension", s.kernel_dimension()},
       {"kernel_indices", s.kernel_indices},
       {"negative_count", s.negative_count},
       {"spectral_radius", s.spectral_radius},
       {"kernel_tol", s.kernel_tol}};
}

void to_json(json& j, const ReducedModel& m) {
  j = {{"q0", m.q0},
       {"kernel_dimension", m.dimension()},
       {"nondegenerate", m.nondegenerate},
       {"fit_rms", m.fit_rms},
       {"condition_number", m.condition_number},
       {"sample_count", m.sample_count}};
  json degrees = json::array();
  for (const DegreeFit& d : m.degrees) {
    degrees.push_back({{"degree", d.degree},
                       {"exponents", d.exponents},
                       {"coefficients", d.coefficients},
                       {"norm", d.norm},
                       {"threshold", d.threshold},
                       {"significant", d.significant}});
  }
  j["degrees"] = degrees;
  j["p"] = m.p_min ? json(*m.p_min) : json("none");
  if (m.p_min && m.p_max && *m.p_max != *m.p_min) j["p_interval"] = {*m.p_min, *m.p_max};
  json asp = json::array();
  for (const AspResult& a : m.asp) {
    asp.push_back({{"degree", a.degree}, {"holds", a.holds}, {"maximum", a.maximum}, {"maximizer", vector_json(a.maximizer)}});
  }
  j["asp"] = asp;
}

void to_json(json& j, const CriticalPoint& c) {
  j = {{"q", c.q},
       {"el_residual_sup", c.el_residual_sup},
       {"negative_count", c.negative_count},
       {"kernel_dimension", c.kernel_dimension},
       {"branch", c.branch},
       {"descent_iterations", c.descent_iterations},
       {"newton_iterations", c.newton_iterations},
       {"min", c.u.min()},
       {"max", c.u.max()}};
}

void to_json(json& j, const BifurcationDiagram& d) {
  json rows = json::array();
  for (const BifurcationRow& r : d.rows) {
    rows.push_back({{"L", r.length},
                    {"eig0", r.eig0},
                    {"eig1", r.eig1},
                    {"q_constant", r.q_constant},
                    {"q_nonconstant", r.q_nonconstant ? json(*r.q_nonconstant) : json(nullptr)},
                    {"note", r.note}});
  }
  const auto onset = kernel_onset(d);
  j = {{"n", d.dimension}, {"rows", rows}, {"kernel_onset", onset ? json(*onset) : json(nullptr)}};
}

void to_json(json& j, const StabilityFit& f) {
  j = {{"slope", f.slope},
       {"gamma_hat", f.gamma_hat},
       {"c_hat", f.c_hat},
       {"r2", f.r2},
       {"window", {f.window.lo, f.window.hi}},
       {"samples_used", f.samples.size()}};
}

void to_json(json& j, const SuperquadraticFamily& f) {
  json rows = json::array();
  for (const SuperquadraticRow& r : f.rows) {
    rows.push_back({{"t", r.t}, {"distance", r.distance}, {"deficit", r.deficit}, {"ratios", r.ratios}});
  }
  j = {{"gammas", f.gammas}, {"direction", vector_json(f.direction)}, {"slope", f.slope}, {"r2", f.r2}, {"rows", rows}};
}

void to_json(json& j, const LojasiewiczResult& r) {
  json crit = json::array();
  for (const auto& c : r.critical_points) crit.push_back(vector_json(c));
  j = {{"exponent", r.exponent},
       {"gamma_star", r.gamma_star},
       {"c_star", r.c_star},
       {"r2", r.r2},
       {"grid_points", r.grid_points},
       {"critical_points", crit}};
}

void to_json(json& j, const Decomposition& d) {
  j = {{"x", vector_json(d.x)},         {"deficit", d.deficit},   {"term_i", d.term_i},
       {"term_ii", d.term_ii},           {"perp_w12", d.perp_w12}, {"coercive_bound", d.coercive_bound}};
}

}  // namespace yamabe
