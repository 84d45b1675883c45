#pragma once

// Flat key=value experiment configuration shared by every subcommand.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace yamabe::lab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  int n = 3;
  double L = 1.0;
  double L_min = 0.8;
  double L_max = 1.2;
  int steps = 41;
  int N = 256;
  int reduction_N = 128;
  double newton_tol = 1e-10;
  double kernel_tol = 1e-7;
  double fit_tol = 1e-6;       // integrability verdict threshold on degree norms
  double fit_noise = 1e-9;     // noise floor for the Taylor fit
  double radius_lo = 1e-3;
  double radius_hi = 5e-2;
  int radius_count = 12;
  int directions = 6;
  int max_mode = 8;
  int starts = 2;
  int j_max = 6;
  double radius_U = 0.1;
  double t_min = 0.005;
  double t_max = 0.05;
  int t_count = 10;
  double loja_radius = 0.1;
  int loja_density = 201;
  std::string loja_target = "fitted";  // fitted | quadratic | quartic
  std::string base = "constant";       // constant | minimizer (spectrum)
  std::uint64_t seed = 1;

  // Every key with its current value, in schema order.
  std::vector<std::pair<std::string, std::string>> entries() const;
  void set(const std::string& key, const std::string& value);
  void validate() const;
};

ExperimentConfig load_config(const std::string& path);
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

}  // namespace yamabe::lab
