#pragma once

#include "types.hpp"

namespace hygampdcs {

struct GampHyper {
  double beta;
  double sigma2_w;
};

// Full per-iteration state.  The intermediates are kept because the activity
// update consumes r_hat/tau_r and the hyperparameter updates consume the
// posterior moments of the final iteration.
struct GampState {
  CMat x_hat;  // N x T
  RMat tau_x;  // N x T
  CMat s_hat;  // L x T
  RMat p_fwd;  // N x T activity priors for the input denoiser

  CMat p_hat;   // L x T
  RMat tau_p;   // L x T
  CMat z0_hat;  // L x T
  RMat tau_z;   // L x T
  RMat tau_s;   // L x T
  CMat r_hat;   // N x T
  RMat tau_r;   // N x T

  RMat varpi;      // N x T active-branch weights
  CMat gamma;      // N x T active-branch means
  RMat tau_gamma;  // N x T active-branch variances
};

RMat abs2(const CMat& m);

GampState init_state(Eigen::Index L, Eigen::Index N, Eigen::Index T, double beta,
                     double p_init);

// One iteration.  A2 = |A|^2 elementwise.  damping in (0,1] blends the new
// x_hat/tau_x/s_hat with the previous ones.  Throws DivergenceError if the
// iterate stops being finite.
void gamp_iteration(const CMat& Y, const CMat& A, const RMat& A2,
                    const GampHyper& hyp, double damping, GampState& st);

}  // namespace hygampdcs
