#include "activity_mp.hpp"

#include <stdexcept>

#include "constants.hpp"

namespace hygampdcs {

void MessageSet::resize(Eigen::Index n, Eigen::Index t) {
  q_fwd.resize(n, t);
  q_bwd.resize(n, t);
  p_fwd.resize(n, t);
  kappa.resize(n, t);
}

double posterior_activity(double q_fwd, double q_bwd, double p_bar) {
  const double on = q_fwd * q_bwd * p_bar;
  const double off = (1.0 - q_fwd) * (1.0 - q_bwd) * (1.0 - p_bar);
  return clamp_prob(on / (on + off));
}

void mp_update(const RMat& p_bar, const Transitions& tr, double p_a, MpMode mode,
               MessageSet& msg) {
  const Eigen::Index N = p_bar.rows();
  const Eigen::Index T = p_bar.cols();
  msg.resize(N, T);

  if (mode == MpMode::Static) {
    msg.q_fwd.setConstant(p_a);
    msg.q_bwd.setConstant(0.5);
    msg.p_fwd.setConstant(p_a);
    for (Eigen::Index t = 0; t < T; ++t)
      for (Eigen::Index n = 0; n < N; ++n)
        msg.kappa(n, t) = posterior_activity(p_a, 0.5, p_bar(n, t));
    return;
  }

  msg.q_fwd.col(0).setConstant(p_a);
  for (Eigen::Index t = 1; t < T; ++t) {
    for (Eigen::Index n = 0; n < N; ++n) {
      const double pb = p_bar(n, t - 1);
      const double q = msg.q_fwd(n, t - 1);
      const double off = (1.0 - pb) * (1.0 - q);
      const double on = pb * q;
      msg.q_fwd(n, t) = clamp_prob((tr.p01 * off + tr.p11 * on) / (off + on));
    }
  }

  if (mode == MpMode::ForwardOnly) {
    msg.q_bwd.setConstant(0.5);
    msg.p_fwd = msg.q_fwd;
    for (Eigen::Index t = 0; t < T; ++t)
      for (Eigen::Index n = 0; n < N; ++n)
        msg.kappa(n, t) = posterior_activity(msg.q_fwd(n, t), 0.5, p_bar(n, t));
    return;
  }

  msg.q_bwd.col(T - 1).setConstant(0.5);
  for (Eigen::Index t = T - 2; t >= 0; --t) {
    for (Eigen::Index n = 0; n < N; ++n) {
      const double pb = p_bar(n, t + 1);
      const double q = msg.q_bwd(n, t + 1);
      const double off = (1.0 - pb) * (1.0 - q);
      const double on = pb * q;
      const double num = tr.p10 * off + tr.p11 * on;
      const double den = (tr.p00 + tr.p10) * off + (tr.p11 + tr.p01) * on;
      msg.q_bwd(n, t) = clamp_prob(num / den);
    }
  }

  msg.p_fwd.col(T - 1) = msg.q_fwd.col(T - 1);
  for (Eigen::Index t = 0; t < T - 1; ++t) {
    for (Eigen::Index n = 0; n < N; ++n) {
      const double qf = msg.q_fwd(n, t);
      const double qb = msg.q_bwd(n, t);
      const double on = qf * qb;
      const double off = (1.0 - qf) * (1.0 - qb);
      msg.p_fwd(n, t) = clamp_prob(on / (off + on));
    }
  }

  for (Eigen::Index t = 0; t < T; ++t)
    for (Eigen::Index n = 0; n < N; ++n)
      msg.kappa(n, t) =
          posterior_activity(msg.q_fwd(n, t), msg.q_bwd(n, t), p_bar(n, t));
}

ChainExact exact_chain_oracle(const RVec& p_bar, const Transitions& tr,
                              double p_a) {
  const int T = static_cast<int>(p_bar.size());
  if (T < 1 || T > 20)
    throw std::invalid_argument("exact_chain_oracle supports 1 <= T <= 20");
  for (int t = 0; t < T; ++t)
    if (!(p_bar(t) > 0.0 && p_bar(t) < 1.0))
      throw std::invalid_argument("evidence must lie in (0,1)");

  RVec post_num = RVec::Zero(T);
  RVec cav_num = RVec::Zero(T);
  RVec cav_den = RVec::Zero(T);
  double z = 0.0;

  const std::uint64_t count = 1ull << T;
  for (std::uint64_t seq = 0; seq < count; ++seq) {
    const int l0 = static_cast<int>(seq & 1u);
    double prior = l0 ? p_a : 1.0 - p_a;
    for (int t = 1; t < T; ++t) {
      const int prev = static_cast<int>((seq >> (t - 1)) & 1u);
      const int cur = static_cast<int>((seq >> t) & 1u);
      prior *= prev ? (cur ? tr.p11 : tr.p10) : (cur ? tr.p01 : tr.p00);
    }
    double ev = 1.0;
    for (int t = 0; t < T; ++t) {
      const int l = static_cast<int>((seq >> t) & 1u);
      ev *= l ? p_bar(t) : 1.0 - p_bar(t);
    }
    const double w = prior * ev;
    z += w;
    for (int t = 0; t < T; ++t) {
      const int l = static_cast<int>((seq >> t) & 1u);
      const double e = l ? p_bar(t) : 1.0 - p_bar(t);
      const double w_cav = w / e;
      cav_den(t) += w_cav;
      if (l) {
        post_num(t) += w;
        cav_num(t) += w_cav;
      }
    }
  }

  ChainExact out;
  out.kappa = post_num / z;
  out.p_fwd = cav_num.cwiseQuotient(cav_den);
  return out;
}

}  // namespace hygampdcs
