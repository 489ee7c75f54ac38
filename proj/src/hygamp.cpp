#include "hygamp.hpp"

#include <limits>

#include "constants.hpp"
#include "denoiser.hpp"

namespace hygampdcs {

EstimationResult run_solver(const CMat& Y, const CMat& A, GampHyper hyp,
                            Transitions tr, double p_a, MpMode mode,
                            const SolverOptions& opts, HyperAdapter* adapter) {
  const Eigen::Index L = A.rows();
  const Eigen::Index N = A.cols();
  const Eigen::Index T = Y.cols();
  const RMat A2 = abs2(A);

  GampState st = init_state(L, N, T, hyp.beta, p_a);
  MessageSet msg;
  RMat p_bar(N, T);
  CMat x_prev = st.x_hat;

  EstimationResult res;
  for (int i = 1; i <= opts.max_iterations; ++i) {
    gamp_iteration(Y, A, A2, hyp, opts.damping, st);
    for (Eigen::Index t = 0; t < T; ++t)
      for (Eigen::Index n = 0; n < N; ++n)
        p_bar(n, t) = activity_evidence(st.r_hat(n, t), st.tau_r(n, t), hyp.beta);
    mp_update(p_bar, tr, p_a, mode, msg);
    st.p_fwd = msg.p_fwd;
    if (adapter) adapter->update(Y, st, msg, p_bar, hyp, tr, p_a);

    const double num = (st.x_hat - x_prev).squaredNorm();
    const double den = x_prev.squaredNorm();
    const bool stop = den < kNormGuard ? num < kNormGuard
                                       : num / den <= opts.epsilon;
    res.residual_history.push_back(
        den < kNormGuard
            ? (num < kNormGuard ? 0.0 : std::numeric_limits<double>::infinity())
            : num / den);
    res.iterations = i;
    x_prev = st.x_hat;
    if (stop) {
      res.converged = true;
      break;
    }
  }

  res.x_hat = std::move(st.x_hat);
  res.kappa = std::move(msg.kappa);
  return res;
}

static EstimationResult run_mode(const CMat& Y, const CMat& A,
                                 const SystemParams& p, const SolverOptions& opts,
                                 MpMode mode) {
  p.validate();
  const Transitions tr = derive_transitions(p.p_a, p.p_10);
  const GampHyper hyp{p.beta, p.sigma2_w};
  return run_solver(Y, A, hyp, tr, p.p_a, mode, opts);
}

EstimationResult run_hygamp_dcs(const CMat& Y, const CMat& A,
                                const SystemParams& p,
                                const SolverOptions& opts) {
  return run_mode(Y, A, p, opts, MpMode::Full);
}

EstimationResult run_forward_only(const CMat& Y, const CMat& A,
                                  const SystemParams& p,
                                  const SolverOptions& opts) {
  return run_mode(Y, A, p, opts, MpMode::ForwardOnly);
}

EstimationResult run_gamp_baseline(const CMat& Y, const CMat& A,
                                   const SystemParams& p,
                                   const SolverOptions& opts) {
  return run_mode(Y, A, p, opts, MpMode::Static);
}

}  // namespace hygampdcs
