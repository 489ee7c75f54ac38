#pragma once

#include <vector>

#include "activity_mp.hpp"
#include "gamp.hpp"
#include "model.hpp"
#include "types.hpp"

namespace hygampdcs {

struct SolverOptions {
  double epsilon = 1e-5;    // squared relative change threshold
  int max_iterations = 200;
  double damping = 1.0;
};

struct EstimationResult {
  CMat x_hat;
  RMat kappa;  // per-entry activity posteriors
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  // squared relative change per iteration
};

// Hook called once per iteration after the activity sweep; lets the EM wrapper
// refresh the model statistics between iterations.
class HyperAdapter {
 public:
  virtual ~HyperAdapter() = default;
  virtual void update(const CMat& Y, const GampState& st, const MessageSet& msg,
                      const RMat& p_bar, GampHyper& hyp, Transitions& tr,
                      double& p_a) = 0;
};

EstimationResult run_solver(const CMat& Y, const CMat& A, GampHyper hyp,
                            Transitions tr, double p_a, MpMode mode,
                            const SolverOptions& opts,
                            HyperAdapter* adapter = nullptr);

// Bidirectional activity tracking across the block.
EstimationResult run_hygamp_dcs(const CMat& Y, const CMat& A,
                                const SystemParams& p, const SolverOptions& opts);

// Causal variant: activity priors use past frames only.
EstimationResult run_forward_only(const CMat& Y, const CMat& A,
                                  const SystemParams& p,
                                  const SolverOptions& opts);

// Frame-independent baseline with the stationary activity prior.
EstimationResult run_gamp_baseline(const CMat& Y, const CMat& A,
                                   const SystemParams& p,
                                   const SolverOptions& opts);

}  // namespace hygampdcs
