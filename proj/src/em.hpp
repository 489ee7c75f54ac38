#pragma once

#include <vector>

#include "hygamp.hpp"
#include "types.hpp"

namespace hygampdcs {

struct Hyperparams {
  double beta;
  double sigma2_w;
  double p_a;
  double p_10;
};

struct EmInit {
  Hyperparams hyp;
  bool beta_clamped = false;  // set when the moment estimate came out <= 0
};

// Data-driven starting point.  snr0_db is the operator's rough SNR guess.
// When noise_term_sigma2 is false the channel-variance estimate subtracts
// L*T*sigma_w (the noise standard deviation); when true it subtracts
// L*T*sigma2_w.
EmInit init_hyperparams(const CMat& Y, const CMat& A, double snr0_db,
                        bool noise_term_sigma2 = false);

// Activity-fraction starting point as a function of L/N: the largest sparsity
// ratio for which a Bernoulli-Gaussian prior is recoverable in the large-system
// limit, scaled by L/N.
double init_activity_fraction(double L_over_N);

// One M-step given the final state of an iteration.  Returns clamped values;
// transitions are re-derived by the caller.
Hyperparams em_update(const CMat& Y, const GampState& st, const MessageSet& msg,
                      const RMat& p_bar, const Hyperparams& cur);

struct EmResult {
  EstimationResult est;
  Hyperparams learned;
  std::vector<Hyperparams> trajectory;  // value entering each iteration
};

EmResult run_em_hygamp_dcs(const CMat& Y, const CMat& A, const Hyperparams& init,
                           const SolverOptions& opts);

}  // namespace hygampdcs
