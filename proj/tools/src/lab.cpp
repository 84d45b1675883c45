#include "lab.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "config.hpp"
#include "yamabe/energy.hpp"
#include "yamabe/errors.hpp"
#include "yamabe/hessian.hpp"
#include "yamabe/reduction.hpp"
#include "yamabe/serialize.hpp"
#include "yamabe/solver.hpp"
#include "yamabe/stability.hpp"
#include "yamabe/version.hpp"

namespace yamabe::lab {

using nlohmann::json;

namespace {

const std::vector<std::string> kSubcommands{"minimize", "spectrum",  "reduce", "exponent",
                                            "superquadratic", "bifurcate", "loja"};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Output {
  json result;
  std::map<std::string, std::string> files;  // csv name -> body rows
};

class Csv {
 public:
  Csv(const std::string& subcommand, const ExperimentConfig& cfg, const std::vector<std::string>& columns) {
    os_ << "# yamabe_lab " << kVersion << "\n# subcommand: " << subcommand << "\n# seed: " << cfg.seed
        << "\n# config:";
    for (const auto& [k, v] : cfg.entries()) os_ << ' ' << k << '=' << v;
    os_ << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
    os_ << '\n';
  }
  template <class... T>
  void row(const T&... cells) {
    std::size_t i = 0;
    ((os_ << (i++ ? "," : "") << cell(cells)), ...);
    os_ << '\n';
  }
  void values(const std::vector<double>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << num(cells[i]);
    os_ << '\n';
  }
  std::string str() const { return os_.str(); }

 private:
  static std::string cell(double v) { return num(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  std::ostringstream os_;
};

SolverOptions solver_options(const ExperimentConfig& cfg) {
  SolverOptions o;
  o.residual_tol = cfg.newton_tol;
  o.kernel_tol = cfg.kernel_tol;
  return o;
}

TaylorOptions taylor_options(const ExperimentConfig& cfg) {
  TaylorOptions o;
  o.radii.clear();
  for (double f : {0.2, 0.4, 0.6, 0.8, 1.0}) o.radii.push_back(f * cfg.radius_U);
  o.j_max = cfg.j_max;
  o.noise_floor = cfg.fit_noise;
  o.graph.radius = cfg.radius_U;
  o.graph.tolerance = cfg.newton_tol;
  return o;
}

// Critical base point for spectra and reductions.
Field base_point(const Manifold& man, const ExperimentConfig& cfg, int grid_size) {
  if (cfg.base == "constant") return constant_point(man, grid_size, cfg.kernel_tol).u;
  return find_minimizers(man, grid_size, cfg.starts, cfg.seed, solver_options(cfg)).points.front().u;
}

struct Reduction {
  Field base;
  Spectrum spectrum;
  ReducedModel model;
};

Reduction reduce_at(const Manifold& man, const ExperimentConfig& cfg) {
  Field v = base_point(man, cfg, cfg.reduction_N);
  Spectrum s = hessian_spectrum(man, v, cfg.kernel_tol);
  ReducedModel m = taylor_of_q(man, v, s.kernel_basis(), taylor_options(cfg));
  return {std::move(v), std::move(s), std::move(m)};
}

Output cmd_minimize(const ExperimentConfig& cfg) {
  const Manifold man = make_product_manifold(cfg.n, cfg.L);
  const MinimizerSearch ms = find_minimizers(man, cfg.N, cfg.starts, cfg.seed, solver_options(cfg));
  Output out;
  out.result = {{"manifold", man}, {"y_ref", ms.y_ref()}, {"starts", ms.starts}, {"points", ms.points},
                {"failures", ms.failures}};
  return out;
}

Output cmd_spectrum(const ExperimentConfig& cfg) {
  const Manifold man = make_product_manifold(cfg.n, cfg.L);
  const Field v = base_point(man, cfg, cfg.N);
  const Spectrum s = hessian_spectrum(man, v, cfg.kernel_tol);
  Output out;
  out.result = {{"manifold", man}, {"base", cfg.base}, {"spectrum", s}, {"lambda1_w12", w12_coercivity(man, v, s)}};
  Csv csv("spectrum", cfg, {"index", "eigenvalue", "kernel"});
  for (int i = 0; i < static_cast<int>(s.eigenvalues.size()); ++i) {
    const bool k = std::find(s.kernel_indices.begin(), s.kernel_indices.end(), i) != s.kernel_indices.end();
    csv.row(i, s.eigenvalues[i], k ? 1 : 0);
  }
  out.files["spectrum.csv"] = csv.str();
  return out;
}

Output cmd_reduce(const ExperimentConfig& cfg) {
  const Manifold man = make_product_manifold(cfg.n, cfg.L);
  const Reduction r = reduce_at(man, cfg);
  Output out;
  out.result = {{"manifold", man},
                {"N", cfg.reduction_N},
                {"kernel_dimension", r.spectrum.kernel_dimension()},
                {"model", r.model},
                {"integrability", to_string(classify_integrability(r.model, cfg.fit_tol))}};
  return out;
}

Output cmd_exponent(const ExperimentConfig& cfg) {
  const Manifold man = make_product_manifold(cfg.n, cfg.L);
  const MinimizerSearch ms = find_minimizers(man, cfg.N, cfg.starts, cfg.seed, solver_options(cfg));
  const Field& v = ms.points.front().u;
  std::vector<Field> minimizers;
  for (const CriticalPoint& p : ms.points) {
    if (p.q - ms.y_ref() <= 1e-10 * std::abs(ms.y_ref())) minimizers.push_back(p.u);
  }
  std::mt19937_64 rng(cfg.seed);
  std::vector<Direction> dirs;
  int i = 0;
  for (const Field& f : random_tangent_fields(man, v, cfg.directions, cfg.max_mode, rng)) {
    dirs.push_back(linear_direction(man, v, f, "random" + std::to_string(i++)));
  }
  const SampleSet set = sample_deficit_distance(man, minimizers, ms.y_ref(), dirs,
                                                log_spaced(cfg.radius_lo, cfg.radius_hi, cfg.radius_count));
  const StabilityFit fit = fit_exponent(set.samples, {cfg.radius_lo, cfg.radius_hi});
  Output out;
  out.result = {{"manifold", man},
                {"y_ref", ms.y_ref()},
                {"minimizer_count", minimizers.size()},
                {"distance", "W12 distance to the solver's verified minimizers, minimised over rotations"},
                {"fit", fit},
                {"warnings", set.warnings}};
  Csv csv("exponent", cfg, {"label", "radius", "distance", "deficit"});
  for (const Sample& s : set.samples) csv.row(s.label, s.radius, s.distance, s.deficit);
  out.files["samples.csv"] = csv.str();
  return out;
}

Output cmd_superquadratic(const ExperimentConfig& cfg) {
  const Manifold man = make_product_manifold(cfg.n, cfg.L);
  const Reduction r = reduce_at(man, cfg);
  if (classify_integrability(r.model, cfg.fit_tol) != Integrability::nonintegrable) {
    throw DomainError("superquadratic family needs a nonintegrable critical point; verdict is " +
                      to_string(classify_integrability(r.model, cfg.fit_tol)));
  }
  GraphMapOptions g = taylor_options(cfg).graph;
  const GraphMap map(man, r.base, r.spectrum.kernel_basis(), g);
  std::vector<double> ts{0.0};
  for (double t : log_spaced(cfg.t_min, cfg.t_max, cfg.t_count)) ts.push_back(t);
  const SuperquadraticFamily fam = superquadratic_family(map, r.model, ts);
  Output out;
  out.result = {{"manifold", man}, {"N", cfg.reduction_N}, {"model", r.model}, {"family", fam}};
  std::vector<std::string> cols{"t", "distance", "deficit"};
  for (double gmm : fam.gammas) {
    char label[40];
    std::snprintf(label, sizeof label, "ratio_gamma_%g", gmm);
    cols.push_back(label);
  }
  Csv csv("superquadratic", cfg, cols);
  for (const SuperquadraticRow& row : fam.rows) {
    std::vector<double> cells{row.t, row.distance, row.deficit};
    cells.insert(cells.end(), row.ratios.begin(), row.ratios.end());
    csv.values(cells);
  }
  out.files["samples.csv"] = csv.str();
  return out;
}

Output cmd_bifurcate(const ExperimentConfig& cfg) {
  const BifurcationDiagram d =
      continuation(cfg.n, cfg.L_min, cfg.L_max, cfg.steps, cfg.N, cfg.seed, solver_options(cfg));
  Output out;
  out.result = {{"diagram", d}, {"critical_length", critical_length(cfg.n)}};
  Csv csv("bifurcate", cfg, {"L", "eig0", "eig1", "q_constant", "q_nonconstant", "note"});
  for (const BifurcationRow& r : d.rows) {
    csv.row(r.length, r.eig0, r.eig1, r.q_constant, r.q_nonconstant ? num(*r.q_nonconstant) : std::string(""), r.note);
  }
  out.files["bifurcation.csv"] = csv.str();
  return out;
}

Output cmd_loja(const ExperimentConfig& cfg) {
  Output out;
  Polynomial q;
  if (cfg.loja_target == "quadratic") {
    q = Polynomial::radial(2, 1);
  } else if (cfg.loja_target == "quartic") {
    q = Polynomial::radial(2, 2);
  } else {
    const Manifold man = make_product_manifold(cfg.n, cfg.L);
    const Reduction r = reduce_at(man, cfg);
    if (r.model.nondegenerate) throw DomainError("no kernel at this base point; nothing to check");
    q = r.model.polynomial;
    out.result["p"] = r.model.p_min ? json(*r.model.p_min) : json("none");
  }
  const LojasiewiczResult res = lojasiewicz_check(q, cfg.loja_radius, cfg.loja_density);
  out.result["target"] = cfg.loja_target;
  out.result["lojasiewicz"] = res;
  return out;
}

json config_json(const ExperimentConfig& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg.entries()) j[k] = v;
  return j;
}

void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << body;
}

std::string usage(const CLI::App& app) {
  std::string s = app.help();
  s += "\nSubcommands: minimize | spectrum | reduce | exponent | superquadratic | bifurcate | loja\n";
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Yamabe energy laboratory on S^1(L) x S^{n-1}", "yamabe_lab"};
  std::string subcommand;
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  app.add_option("subcommand", subcommand, "experiment to run")->required();
  app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--set", sets, "override KEY=VAL (repeatable)")->allow_extra_args(false);
  app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << usage(app);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << usage(app);
    return 1;
  }
  if (std::find(kSubcommands.begin(), kSubcommands.end(), subcommand) == kSubcommands.end()) {
    err << "unknown subcommand '" << subcommand << "'\n" << usage(app);
    return 1;
  }

  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    for (const std::string& s : sets) apply_override(cfg, s);
    if (seed_opt->count() > 0) cfg.seed = seed;
    cfg.validate();
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return 1;
  }

  json summary{{"version", kVersion}, {"subcommand", subcommand}, {"seed", cfg.seed}, {"config", config_json(cfg)}};
  Output result;
  int code = 0;
  try {
    if (subcommand == "minimize") result = cmd_minimize(cfg);
    else if (subcommand == "spectrum") result = cmd_spectrum(cfg);
    else if (subcommand == "reduce") result = cmd_reduce(cfg);
    else if (subcommand == "exponent") result = cmd_exponent(cfg);
    else if (subcommand == "superquadratic") result = cmd_superquadratic(cfg);
    else if (subcommand == "bifurcate") result = cmd_bifurcate(cfg);
    else result = cmd_loja(cfg);
    summary["status"] = "ok";
    summary["result"] = result.result;
  } catch (const std::exception& e) {
    code = 2;
    result.files.clear();
    summary["status"] = "numerical_failure";
    summary["error"] = e.what();
    if (dynamic_cast<const SingularError*>(&e)) summary["error_kind"] = "singular";
    else if (dynamic_cast<const ConvergenceError*>(&e)) summary["error_kind"] = "convergence";
    else if (dynamic_cast<const NumericalError*>(&e)) summary["error_kind"] = "numerical";
    else if (dynamic_cast<const DomainError*>(&e)) summary["error_kind"] = "domain";
    else summary["error_kind"] = "other";
    err << subcommand << " failed: " << e.what() << '\n';
  }

  try {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    for (const auto& [name, body] : result.files) write_file(dir / name, body);
  } catch (const std::exception& e) {
    err << "writing outputs failed: " << e.what() << '\n';
    return 2;
  }
  if (code == 0) out << (std::filesystem::path(out_dir) / "summary.json").string() << '\n';
  return code;
}

}  // namespace yamabe::lab
