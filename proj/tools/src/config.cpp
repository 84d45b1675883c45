#include "config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace yamabe::lab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
void parse_number(const std::string& key, const std::string& text, T& out) {
  T v{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ConfigError("bad value for " + key + ": '" + text + "'");
  out = v;
}

std::string format(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  return {{"n", std::to_string(n)},
          {"L", format(L)},
          {"L_min", format(L_min)},
          {"L_max", format(L_max)},
          {"steps", std::to_string(steps)},
          {"N", std::to_string(N)},
          {"reduction_N", std::to_string(reduction_N)},
          {"newton_tol", format(newton_tol)},
          {"kernel_tol", format(kernel_tol)},
          {"fit_tol", format(fit_tol)},
          {"fit_noise", format(fit_noise)},
          {"radius_lo", format(radius_lo)},
          {"radius_hi", format(radius_hi)},
          {"radius_count", std::to_string(radius_count)},
          {"directions", std::to_string(directions)},
          {"max_mode", std::to_string(max_mode)},
          {"starts", std::to_string(starts)},
          {"j_max", std::to_string(j_max)},
          {"radius_U", format(radius_U)},
          {"t_min", format(t_min)},
          {"t_max", format(t_max)},
          {"t_count", std::to_string(t_count)},
          {"loja_radius", format(loja_radius)},
          {"loja_density", std::to_string(loja_density)},
          {"loja_target", loja_target},
          {"base", base},
          {"seed", std::to_string(seed)}};
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "n") parse_number(key, value, n);
  else if (key == "L") parse_number(key, value, L);
  else if (key == "L_min") parse_number(key, value, L_min);
  else if (key == "L_max") parse_number(key, value, L_max);
  else if (key == "steps") parse_number(key, value, steps);
  else if (key == "N") parse_number(key, value, N);
  else if (key == "reduction_N") parse_number(key, value, reduction_N);
  else if (key == "newton_tol") parse_number(key, value, newton_tol);
  else if (key == "kernel_tol") parse_number(key, value, kernel_tol);
  else if (key == "fit_tol") parse_number(key, value, fit_tol);
  else if (key == "fit_noise") parse_number(key, value, fit_noise);
  else if (key == "radius_lo") parse_number(key, value, radius_lo);
  else if (key == "radius_hi") parse_number(key, value, radius_hi);
  else if (key == "radius_count") parse_number(key, value, radius_count);
  else if (key == "directions") parse_number(key, value, directions);
  else if (key == "max_mode") parse_number(key, value, max_mode);
  else if (key == "starts") parse_number(key, value, starts);
  else if (key == "j_max") parse_number(key, value, j_max);
  else if (key == "radius_U") parse_number(key, value, radius_U);
  else if (key == "t_min") parse_number(key, value, t_min);
  else if (key == "t_max") parse_number(key, value, t_max);
  else if (key == "t_count") parse_number(key, value, t_count);
  else if (key == "loja_radius") parse_number(key, value, loja_radius);
  else if (key == "loja_density") parse_number(key, value, loja_density);
  else if (key == "loja_target") loja_target = value;
  else if (key == "base") base = value;
  else if (key == "seed") parse_number(key, value, seed);
  else throw ConfigError("unknown config key '" + key + "'");
}

void ExperimentConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid config: " + what);
  };
  need(n >= 3, "n must be >= 3");
  need(L > 0.0, "L must be positive");
  need(L_min > 0.0 && L_max > L_min, "need 0 < L_min < L_max");
  need(steps >= 2, "steps must be >= 2");
  need(N >= 8 && N % 2 == 0, "N must be even and >= 8");
  need(reduction_N >= 8 && reduction_N % 2 == 0, "reduction_N must be even and >= 8");
  need(newton_tol > 0.0 && kernel_tol > 0.0 && fit_tol > 0.0 && fit_noise > 0.0, "tolerances must be positive");
  need(radius_lo > 0.0 && radius_hi > radius_lo, "need 0 < radius_lo < radius_hi");
  need(radius_count >= 2, "radius_count must be >= 2");
  need(directions >= 1, "directions must be >= 1");
  need(max_mode >= 1 && max_mode < N / 2, "max_mode must be in [1, N/2)");
  need(starts >= 0, "starts must be >= 0");
  need(j_max >= 2, "j_max must be >= 2");
  need(radius_U > 0.0, "radius_U must be positive");
  need(t_min > 0.0 && t_max > t_min && t_max <= radius_U, "need 0 < t_min < t_max <= radius_U");
  need(t_count >= 2, "t_count must be >= 2");
  need(loja_radius > 0.0, "loja_radius must be positive");
  need(loja_density >= 5, "loja_density must be >= 5");
  need(loja_target == "fitted" || loja_target == "quadratic" || loja_target == "quartic",
       "loja_target must be fitted, quadratic or quartic");
  need(base == "constant" || base == "minimizer", "base must be constant or minimizer");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set expects KEY=VAL, got '" + assignment + "'");
  cfg.set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

}  // namespace yamabe::lab
