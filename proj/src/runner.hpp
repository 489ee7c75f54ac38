#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"
#include "em.hpp"
#include "se.hpp"

namespace hygampdcs {

struct TrialRecord {
  std::string cell_id;
  std::string algo;
  std::uint64_t seed;
  double snr_db;
  int L;
  int N;
  int T;
  double p_a;
  double p_10;
  int iterations;
  bool converged;
  double tnmse_db;  // NaN when the block was all inactive or the run diverged
  double taer;      // NaN when the run diverged
  double runtime_ms;
};

struct CellAggregate {
  std::string cell_id;
  std::string algo;
  int trials;
  int diverged;
  double snr_db;
  int L;
  int N;
  int T;
  double p_a;
  double p_10;
  double mean_tnmse_db;
  double se_tnmse_db;
  int tnmse_trials;  // trials entering the TNMSE mean
  double mean_taer;
  double se_taer;
  double mean_iterations;
  double converged_fraction;
  double mean_runtime_ms;
};

struct RunOutput {
  std::vector<TrialRecord> records;
  std::vector<CellAggregate> aggregates;
};

std::string cell_id_for(const SystemParams& p);

// Runs the configured cell (expand_sweep = false) or the cross product of the
// sweep axes.  All per-(cell, trial) random streams derive from cfg.seed, so
// results do not depend on thread scheduling.
RunOutput run_experiment(const ExperimentConfig& cfg, bool expand_sweep);

bool all_diverged(const std::vector<TrialRecord>& records);

std::string records_csv(const std::vector<TrialRecord>& records);
std::vector<TrialRecord> parse_records_csv(const std::string& text);
std::string aggregates_csv(const std::vector<CellAggregate>& aggs);
std::string summarize(const std::vector<CellAggregate>& aggs);

// Picks the power threshold minimizing the error count over a pooled held-out
// calibration set.
double calibrate_power_threshold(const ExperimentConfig& cfg,
                                 const SystemParams& cell,
                                 std::size_t cell_index, Algorithm algo,
                                 double snr0_db, int calibration_trials = 50);

// Threshold minimizing misses + false alarms over (power, active) pairs.
double min_error_threshold(std::vector<std::pair<double, std::uint8_t>> pool);

}  // namespace hygampdcs
