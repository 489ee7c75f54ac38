#pragma once

#include "model.hpp"
#include "types.hpp"

namespace hygampdcs {

// How activity information is combined across frames.
//   Full:        forward and backward sweeps over the whole block.
//   ForwardOnly: forward sweep only (causal prior).
//   Static:      no temporal coupling; the stationary prior everywhere.
enum class MpMode { Full, ForwardOnly, Static };

struct MessageSet {
  RMat q_fwd;  // N x T forward messages
  RMat q_bwd;  // N x T backward messages (last column fixed at 1/2)
  RMat p_fwd;  // N x T leave-current-frame-out activity priors
  RMat kappa;  // N x T activity posteriors

  void resize(Eigen::Index n, Eigen::Index t);
};

// Combines the two directional messages with the local evidence into the
// per-entry activity posterior.
double posterior_activity(double q_fwd, double q_bwd, double p_bar);

// One sweep of the activity chain given evidence p_bar (N x T).
void mp_update(const RMat& p_bar, const Transitions& tr, double p_a, MpMode mode,
               MessageSet& msg);

// Exact single-chain marginals by enumeration over all activity sequences.
// p_fwd[t] excludes the evidence at frame t; kappa[t] uses all of it.  T <= 20.
struct ChainExact {
  RVec p_fwd;
  RVec kappa;
};
ChainExact exact_chain_oracle(const RVec& p_bar, const Transitions& tr, double p_a);

}  // namespace hygampdcs
