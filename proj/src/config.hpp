#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hygamp.hpp"
#include "metrics.hpp"
#include "model.hpp"

namespace hygampdcs {

enum class Algorithm { HygampDcs, ForwardOnly, GampBaseline, EmHygampDcs };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);  // throws ConfigError

struct DetectionSpec {
  DetectionRule rule = DetectionRule::PosteriorThreshold;
  double threshold = 0.5;
  bool auto_threshold = false;  // power rule only: calibrate per cell
};

struct EmSpec {
  bool auto_snr0 = true;
  double snr0_db = 0.0;  // used when auto_snr0 is false
  std::vector<double> snr0_grid_db = {-25.0, -20.0, -15.0, -10.0, -5.0, 0.0};
  bool init_beta_noise_sigma2 = false;  // subtract L*T*sigma2 instead of L*T*sigma
};

struct SeSpec {
  int samples = 100000;
  int max_iterations = 100;
  std::string mode = "known";  // "known" | "em"
};

struct SweepAxes {
  std::vector<double> snr_db;
  std::vector<int> L;
  std::vector<int> T;
  std::vector<double> p_11;
};

struct ExperimentConfig {
  SystemParams system;
  std::vector<Algorithm> algorithms = {Algorithm::HygampDcs};
  DetectionSpec detection;
  int trials = 100;
  std::uint64_t seed = 1;
  int threads = 1;
  SolverOptions solver;
  EmSpec em;
  SeSpec se;
  SweepAxes sweep;
};

// Strict parse: unknown keys anywhere are rejected.  Throws ConfigError.
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_file(const std::string& path);

// Command-line overrides.  Supported keys: seed, trials, threads, algo.
void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value);

}  // namespace hygampdcs
