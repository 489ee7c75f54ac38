#include "em.hpp"

#include <cmath>
#include <stdexcept>

#include "constants.hpp"

namespace hygampdcs {

namespace {

double norm_cdf_neg(double c) { return 0.5 * std::erfc(c / std::sqrt(2.0)); }

double norm_pdf(double c) {
  return std::exp(-0.5 * c * c) / std::sqrt(2.0 * M_PI);
}

// Largest recoverable sparsity ratio for a Bernoulli-Gaussian prior at
// undersampling ratio L/N, as a function of the threshold parameter c.
double rho_of_c(double c, double N_over_L) {
  const double f = (1.0 + c * c) * norm_cdf_neg(c) - c * norm_pdf(c);
  return (1.0 - 2.0 * N_over_L * f) / (1.0 + c * c - 2.0 * f);
}

// p_10' capped so the implied p_01 stays a probability.
double cap_p10(double p_a, double p_10) {
  const double hi = (1.0 - kLearnedProbFloor) * (1.0 - p_a) / p_a;
  return std::min(p_10, hi);
}

}  // namespace

double init_activity_fraction(double L_over_N) {
  if (!(L_over_N > 0.0)) throw std::invalid_argument("L/N must be > 0");
  const double N_over_L = 1.0 / L_over_N;
  auto f = [&](double c) { return rho_of_c(c, N_over_L); };

  double best_c = 0.1, best_v = f(0.1);
  for (int k = 2; k <= 100; ++k) {
    const double c = 0.1 * k;
    const double v = f(c);
    if (v > best_v) {
      best_v = v;
      best_c = c;
    }
  }
  double lo = std::max(1e-6, best_c - 0.1);
  double hi = std::min(10.0, best_c + 0.1);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c1 = hi - gr * (hi - lo);
  double c2 = lo + gr * (hi - lo);
  double f1 = f(c1), f2 = f(c2);
  while (hi - lo > 1e-8) {
    if (f1 < f2) {
      lo = c1;
      c1 = c2;
      f1 = f2;
      c2 = lo + gr * (hi - lo);
      f2 = f(c2);
    } else {
      hi = c2;
      c2 = c1;
      f2 = f1;
      c1 = hi - gr * (hi - lo);
      f1 = f(c1);
    }
  }
  return L_over_N * f(0.5 * (lo + hi));
}

EmInit init_hyperparams(const CMat& Y, const CMat& A, double snr0_db,
                        bool noise_term_sigma2) {
  const double L = static_cast<double>(A.rows());
  const double N = static_cast<double>(A.cols());
  const double T = static_cast<double>(Y.cols());
  const double y2 = Y.squaredNorm();
  const double a2 = A.squaredNorm();
  const double snr0 = std::pow(10.0, snr0_db / 10.0);

  EmInit out;
  out.hyp.sigma2_w = y2 / ((snr0 + 1.0) * L * T);
  out.hyp.p_a = clamp_learned_prob(init_activity_fraction(L / N));
  const double noise_term =
      noise_term_sigma2 ? out.hyp.sigma2_w : std::sqrt(out.hyp.sigma2_w);
  double beta = (y2 - L * T * noise_term) / (a2 * out.hyp.p_a * T);
  if (!(beta > 0.0)) {
    beta = 1e-6;
    out.beta_clamped = true;
  }
  out.hyp.beta = beta;
  out.hyp.p_10 =
      clamp_learned_prob(cap_p10(out.hyp.p_a, out.hyp.p_a));
  return out;
}

Hyperparams em_update(const CMat& Y, const GampState& st, const MessageSet& msg,
                      const RMat& p_bar, const Hyperparams& cur) {
  const Eigen::Index L = Y.rows();
  const Eigen::Index T = Y.cols();
  const Eigen::Index N = st.x_hat.rows();
  Hyperparams nxt = cur;

  double acc = 0.0;
  for (Eigen::Index t = 0; t < T; ++t)
    for (Eigen::Index l = 0; l < L; ++l)
      acc += std::norm(Y(l, t) - st.z0_hat(l, t)) + st.tau_z(l, t);
  nxt.sigma2_w = std::max(acc / (static_cast<double>(L) * T), kVarianceFloor);

  double num = 0.0, den = 0.0;
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index n = 0; n < N; ++n) {
      const double w = st.varpi(n, t);
      num += w * (std::norm(st.gamma(n, t)) + st.tau_gamma(n, t));
      den += w;
    }
  }
  if (den > 1e-12) nxt.beta = std::max(num / den, kVarianceFloor);

  nxt.p_a = clamp_learned_prob(msg.kappa.col(0).mean());

  if (T > 1) {
    // Transitions in effect during the sweep that produced the messages.
    const double p10 = cur.p_10;
    const double p11 = 1.0 - p10;
    const double p01 = cur.p_a * cur.p_10 / (1.0 - cur.p_a);
    const double p00 = 1.0 - p01;
    double t_num = 0.0, t_den = 0.0;
    for (Eigen::Index t = 1; t < T; ++t) {
      for (Eigen::Index n = 0; n < N; ++n) {
        const double k_prev = msg.kappa(n, t - 1);
        const double qf = msg.q_fwd(n, t - 1);
        const double pb_prev = p_bar(n, t - 1);
        const double phi =
            qf * pb_prev / ((1.0 - qf) * (1.0 - pb_prev) + qf * pb_prev);
        const double qb = msg.q_bwd(n, t);
        const double pb = p_bar(n, t);
        const double phi_b = qb * pb / ((1.0 - qb) * (1.0 - pb) + qb * pb);
        // Pairwise activity posterior across the transition, normalized over
        // the four label combinations.
        const double z = p00 * (1.0 - phi) * (1.0 - phi_b) +
                         p01 * (1.0 - phi) * phi_b +
                         p10 * phi * (1.0 - phi_b) + p11 * phi * phi_b;
        const double on_on = p11 * phi * phi_b / z;
        t_num += k_prev - on_on;
        t_den += k_prev;
      }
    }
    if (t_den > 1e-12)
      nxt.p_10 = clamp_learned_prob(cap_p10(nxt.p_a, t_num / t_den));
    else
      nxt.p_10 = clamp_learned_prob(cap_p10(nxt.p_a, cur.p_10));
  }
  return nxt;
}

namespace {

class EmAdapter : public HyperAdapter {
 public:
  explicit EmAdapter(const Hyperparams& h) : cur_(h) { traj_.push_back(h); }

  void update(const CMat& Y, const GampState& st, const MessageSet& msg,
              const RMat& p_bar, GampHyper& hyp, Transitions& tr,
              double& p_a) override {
    cur_ = em_update(Y, st, msg, p_bar, cur_);
    hyp.beta = cur_.beta;
    hyp.sigma2_w = cur_.sigma2_w;
    tr = derive_transitions(cur_.p_a, cur_.p_10);
    p_a = cur_.p_a;
    traj_.push_back(cur_);
  }

  const Hyperparams& current() const { return cur_; }
  std::vector<Hyperparams> take_trajectory() { return std::move(traj_); }

 private:
  Hyperparams cur_;
  std::vector<Hyperparams> traj_;
};

}  // namespace

EmResult run_em_hygamp_dcs(const CMat& Y, const CMat& A, const Hyperparams& init,
                           const SolverOptions& opts) {
  EmAdapter adapter(init);
  const GampHyper hyp{init.beta, init.sigma2_w};
  const Transitions tr = derive_transitions(init.p_a, init.p_10);
  EmResult out;
  out.est = run_solver(Y, A, hyp, tr, init.p_a, MpMode::Full, opts, &adapter);
  out.learned = adapter.current();
  out.trajectory = adapter.take_trajectory();
  return out;
}

}  // namespace hygampdcs
