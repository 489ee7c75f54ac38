#include "gamp.hpp"

#include <cmath>

#include "constants.hpp"
#include "denoiser.hpp"
#include "errors.hpp"

namespace hygampdcs {

RMat abs2(const CMat& m) { return m.cwiseAbs2(); }

GampState init_state(Eigen::Index L, Eigen::Index N, Eigen::Index T, double beta,
                     double p_init) {
  GampState st;
  st.x_hat = CMat::Zero(N, T);
  st.tau_x = RMat::Constant(N, T, p_init * beta);
  st.s_hat = CMat::Zero(L, T);
  st.p_fwd = RMat::Constant(N, T, p_init);
  st.p_hat = CMat::Zero(L, T);
  st.tau_p = RMat::Zero(L, T);
  st.z0_hat = CMat::Zero(L, T);
  st.tau_z = RMat::Zero(L, T);
  st.tau_s = RMat::Zero(L, T);
  st.r_hat = CMat::Zero(N, T);
  st.tau_r = RMat::Zero(N, T);
  st.varpi = RMat::Zero(N, T);
  st.gamma = CMat::Zero(N, T);
  st.tau_gamma = RMat::Zero(N, T);
  return st;
}

void gamp_iteration(const CMat& Y, const CMat& A, const RMat& A2,
                    const GampHyper& hyp, double damping, GampState& st) {
  const Eigen::Index L = A.rows();
  const Eigen::Index N = A.cols();
  const Eigen::Index T = Y.cols();
  const double th = damping;

  st.tau_p.noalias() = A2 * st.tau_x;
  st.p_hat.noalias() = A * st.x_hat;

  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index l = 0; l < L; ++l) {
      const double tp = st.tau_p(l, t);
      const Complex ph = st.p_hat(l, t) - tp * st.s_hat(l, t);
      st.p_hat(l, t) = ph;
      const auto od = output_denoise(Y(l, t), ph, tp, hyp.sigma2_w);
      st.z0_hat(l, t) = od.z0_hat;
      st.tau_z(l, t) = od.tau_z;
      double ts = (1.0 - od.tau_z / tp) / tp;
      if (ts < kVarianceFloor) ts = kVarianceFloor;
      st.tau_s(l, t) = ts;
      const Complex s_new = (od.z0_hat - ph) / tp;
      st.s_hat(l, t) = th * s_new + (1.0 - th) * st.s_hat(l, t);
    }
  }

  RMat tau_r_den(N, T);
  tau_r_den.noalias() = A2.transpose() * st.tau_s;
  st.r_hat.noalias() = A.adjoint() * st.s_hat;
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index n = 0; n < N; ++n) {
      double den = tau_r_den(n, t);
      if (den < kNormGuard) den = kNormGuard;
      const double tr = 1.0 / den;
      st.tau_r(n, t) = tr;
      st.r_hat(n, t) = st.x_hat(n, t) + tr * st.r_hat(n, t);
      const auto id =
          input_denoise(st.r_hat(n, t), tr, hyp.beta, st.p_fwd(n, t));
      st.varpi(n, t) = id.varpi;
      st.gamma(n, t) = id.gamma;
      st.tau_gamma(n, t) = id.tau_gamma;
      st.x_hat(n, t) = th * id.x_hat + (1.0 - th) * st.x_hat(n, t);
      st.tau_x(n, t) = th * id.tau_x + (1.0 - th) * st.tau_x(n, t);
    }
  }

  if (!st.x_hat.allFinite() || !st.s_hat.allFinite() || !st.tau_x.allFinite())
    throw DivergenceError("iterate became non-finite");
}

}  // namespace hygampdcs
