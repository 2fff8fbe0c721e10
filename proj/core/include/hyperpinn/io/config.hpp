#pragma once

// Run configuration: a flat text file of `section.key = value` lines
// ('#' starts a comment), plus `--set section.key=value` overrides.
// Lists are comma separated. Unknown keys and malformed values raise
// ConfigError naming the key.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hyperpinn/ad/param_vector.hpp"
#include "hyperpinn/bvp/problem.hpp"
#include "hyperpinn/net/field_network.hpp"
#include "hyperpinn/train/trainer.hpp"

namespace hyperpinn::io {

class Config {
 public:
  static Config parse(std::string_view text, std::string_view origin = "config");
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  // "section.key=value"
  void apply_override(std::string_view assignment);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return values_; }

  // Sorted "key = value" lines.
  std::string canonical() const;

 private:
  std::map<std::string, std::string> values_;
};

const std::vector<std::string>& known_keys();

struct RunConfig {
  // problem
  std::string preset = "nh_simple_shear";
  std::array<int, 3> grid{15, 15, 15};
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  double shear = 0.5;
  double load = 0.0;  // traction (Pa) or end displacement (m), preset-dependent
  std::array<double, 9> affine_F{1, 0, 0, 0, 1, 0, 0, 0, 1};
  bvp::LossMask mask = bvp::LossMask::Full;
  std::array<double, 3> body_force{};
  // material
  std::string model = "neo_hookean";
  double lambda = 577.0;
  double mu = 385.0;
  std::vector<double> alpha{1.0, -2.0};
  std::vector<double> mu_r{100.0, 50.0};
  // network
  std::vector<int> hidden{64, 64, 64};
  int features = 64;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  double stress_scale = 385.0;
  double output_init_scale = 1e-3;  // last-layer weights, displacement rows
  double stress_init_scale = 1e-3;  // last-layer weights, stress rows
  // optimizer
  std::string method = "lbfgs";
  int max_iterations = 1000;
  int history = 20;
  double gradient_tolerance = 1e-8;
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_probes = 25;
  double initial_step = 1.0;
  double gd_step = 1e-3;
  // curriculum
  std::vector<double> schedule{1.0};
  // evaluation
  long chunk_size = 256;
  int threads = 1;
  // output
  std::string output_dir;
  bool wall_time = false;
  std::array<int, 3> export_grid{15, 15, 15};
};

// Resolves preset-dependent defaults, then applies explicit keys.
RunConfig resolve(const Config& config);
// Every key with its effective value.
Config to_config(const RunConfig& run);
// FNV-1a 64 of the canonical effective configuration.
std::uint64_t config_hash(const RunConfig& run);

bvp::ProblemSpec build_problem(const RunConfig& run);
net::FieldNetwork build_network(const RunConfig& run);
ad::ParamVector initial_parameters(const RunConfig& run, const net::FieldNetwork& network);
train::TrainerConfig trainer_config(const RunConfig& run);

// Output directory: output.dir under $HYPERPINN_OUTPUT_ROOT (or the working
// directory) unless absolute.
std::filesystem::path output_directory(const RunConfig& run);

}  // namespace hyperpinn::io
