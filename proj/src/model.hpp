#pragma once

#include <cstdint>

#include "types.hpp"

namespace hygampdcs {

// One-step transition probabilities of the activity Markov chain.
// p01 = Pr(active at t | inactive at t-1), p10 = Pr(inactive at t | active at t-1).
struct Transitions {
  double p01;
  double p00;
  double p10;
  double p11;
};

// Builds the transition set whose stationary distribution is (1 - p_a, p_a).
Transitions derive_transitions(double p_a, double p_10);

enum class PilotNormalization { UnitColumn, UnitEntry };

struct SystemParams {
  int N = 1000;  // users
  int L = 300;   // pilot sequence length
  int T = 4;     // frames per block
  double p_a = 0.2;
  double p_10 = 0.25;
  double beta = 1.0;      // channel gain variance
  double sigma2_w = 0.1;  // noise variance
  PilotNormalization pilot_norm = PilotNormalization::UnitColumn;

  void validate() const;  // throws std::invalid_argument
  double snr_db() const;
  static double sigma2_for_snr_db(double beta, double snr_db);
};

struct GroundTruth {
  ByteMat activity;  // N x T in {0,1}
  CMat gains;        // N x T, sqrt(beta) * CN(0,1)
  CMat signal;       // N x T, activity .* gains
};

GroundTruth sample_ground_truth(const SystemParams& p, std::uint64_t seed);

// L x N pilot matrix with i.i.d. CN(0, 1/L) entries, then rescaled so that
// either each column (UnitColumn) or each entry (UnitEntry) has unit power.
// UnitEntry keeps only the random phases, so every sequence carries power L.
CMat generate_pilots(const SystemParams& p, std::uint64_t seed);

// Y = A * signal + W with W i.i.d. CN(0, sigma2_w).
CMat synthesize_received(const CMat& pilots, const GroundTruth& truth,
                         const SystemParams& p, std::uint64_t seed);

}  // namespace hygampdcs
