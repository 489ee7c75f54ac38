#include "se.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "activity_mp.hpp"
#include "constants.hpp"
#include "denoiser.hpp"
#include "rng.hpp"

namespace hygampdcs {

namespace {

constexpr double kPsiUpper = 32.0;  // (1+S)exp(-S) < 1e-12 beyond this point
constexpr double kPsiTol = 1e-10;

double psi_integrand(double s, double b, double c) {
  return s * std::exp(-s) / (1.0 + c * std::exp(-b * s));
}

double adaptive_simpson(double b, double c, double lo, double hi, double flo,
                        double fmid, double fhi, double whole, double tol,
                        int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lmid = 0.5 * (lo + mid);
  const double rmid = 0.5 * (mid + hi);
  const double flm = psi_integrand(lmid, b, c);
  const double frm = psi_integrand(rmid, b, c);
  const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
  const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(b, c, lo, mid, flo, flm, fmid, left, 0.5 * tol,
                          depth - 1) +
         adaptive_simpson(b, c, mid, hi, fmid, frm, fhi, right, 0.5 * tol,
                          depth - 1);
}

}  // namespace

double se_psi(double b, double rho0) {
  if (!(rho0 > 0.0 && rho0 < 1.0))
    throw std::invalid_argument("rho0 must lie in (0,1)");
  if (!(b >= 0.0)) throw std::invalid_argument("b must be >= 0");
  const double c = (1.0 / rho0 - 1.0) * (1.0 + b);
  const double lo = 0.0, hi = kPsiUpper;
  const double flo = psi_integrand(lo, b, c);
  const double fmid = psi_integrand(0.5 * (lo + hi), b, c);
  const double fhi = psi_integrand(hi, b, c);
  const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  return adaptive_simpson(b, c, lo, hi, flo, fmid, fhi, whole, kPsiTol, 48);
}

double se_expected_tau_x(double tau_r, double beta, double rho0) {
  if (!(tau_r > 0.0)) throw std::invalid_argument("tau_r must be > 0");
  const double bp = beta + tau_r;
  const double psi = se_psi(beta / tau_r, rho0);
  return rho0 * beta * tau_r / bp + rho0 * beta * beta * (1.0 - psi) / bp;
}

SeStep se_step(double tau_r, const SystemParams& p) {
  SeStep s;
  s.e_tau_x = se_expected_tau_x(tau_r, p.beta, p.p_a);
  s.tau_r_next =
      p.sigma2_w + static_cast<double>(p.N) / p.L * s.e_tau_x;
  return s;
}

namespace {

struct ScalarSamples {
  ByteMat lambda;  // S x T
  CMat x;          // S x T
  CMat u;          // S x T unit-variance noise directions
  RVec x_pow;      // per-frame mean |x|^2
};

ScalarSamples draw_samples(const SystemParams& p, int S, std::uint64_t seed) {
  const Transitions tr = derive_transitions(p.p_a, p.p_10);
  ScalarSamples sm;
  sm.lambda.resize(S, p.T);
  sm.x.resize(S, p.T);
  sm.u.resize(S, p.T);

  auto act = make_engine(seed, "se-activity");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int s = 0; s < S; ++s) {
    std::uint8_t prev = unif(act) < p.p_a ? 1 : 0;
    sm.lambda(s, 0) = prev;
    for (int t = 1; t < p.T; ++t) {
      prev = unif(act) < (prev ? tr.p11 : tr.p01) ? 1 : 0;
      sm.lambda(s, t) = prev;
    }
  }
  auto ch = make_engine(seed, "se-channel");
  auto nz = make_engine(seed, "se-noise");
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < p.T; ++t) {
    for (int s = 0; s < S; ++s) {
      sm.x(s, t) =
          sm.lambda(s, t) ? sample_cn(ch, p.beta, unit) : Complex(0.0, 0.0);
      sm.u(s, t) = sample_cn(nz, 1.0, unit);
    }
  }
  sm.x_pow = sm.x.cwiseAbs2().colwise().mean();
  return sm;
}

SeTrajectory run_se(const SystemParams& p, const SeOptions& opts,
                    std::uint64_t seed, bool em_mode, double snr0_db,
                    bool noise_term_sigma2) {
  p.validate();
  const int S = opts.samples;
  const int T = p.T;
  const double n_over_l = static_cast<double>(p.N) / p.L;
  ScalarSamples sm = draw_samples(p, S, seed);
  const double total_pow = sm.x_pow.sum();

  Hyperparams hb{p.beta, p.sigma2_w, p.p_a, p.p_10};
  if (em_mode) {
    // Moment stand-ins for one synthesized block in the large-system limit.
    const double y2_entry = n_over_l * p.p_a * p.beta + p.sigma2_w;
    const double snr0 = std::pow(10.0, snr0_db / 10.0);
    hb.sigma2_w = y2_entry / (snr0 + 1.0);
    hb.p_a = clamp_learned_prob(init_activity_fraction(1.0 / n_over_l));
    const double nt = noise_term_sigma2 ? hb.sigma2_w : std::sqrt(hb.sigma2_w);
    double beta = (y2_entry - nt) * (static_cast<double>(p.L) / p.N) / hb.p_a;
    if (!(beta > 0.0)) beta = 1e-6;
    hb.beta = beta;
    double p10 = hb.p_a;
    const double hi = (1.0 - kLearnedProbFloor) * (1.0 - hb.p_a) / hb.p_a;
    hb.p_10 = clamp_learned_prob(std::min(p10, hi));
  }
  Transitions trb = derive_transitions(hb.p_a, hb.p_10);

  CMat x_hat = CMat::Zero(S, T);
  RMat tau_x = RMat::Constant(S, T, hb.p_a * hb.beta);
  RMat rho = RMat::Constant(S, T, hb.p_a);
  RMat varpi(S, T), tau_gamma(S, T), pbar(S, T);
  CMat gamma(S, T);
  MessageSet msg;

  RVec tau_p_true(T), tau_p_alg(T), tau_r_true(T), tau_r_alg(T);
  for (int t = 0; t < T; ++t) {
    tau_p_true(t) = n_over_l * sm.x_pow(t);
    tau_p_alg(t) = n_over_l * hb.p_a * hb.beta;
  }
  RVec tau_r_prev = RVec::Zero(T);

  SeTrajectory traj;
  if (em_mode) traj.hyper_trajectory.push_back(hb);

  for (int i = 1; i <= opts.max_iterations; ++i) {
    for (int t = 0; t < T; ++t) {
      tau_r_alg(t) = hb.sigma2_w + tau_p_alg(t);
      tau_r_true(t) = em_mode ? p.sigma2_w + tau_p_true(t) : tau_r_alg(t);
    }

    for (int t = 0; t < T; ++t) {
      const double sd = std::sqrt(tau_r_true(t));
      const double tra = tau_r_alg(t);
      for (int s = 0; s < S; ++s) {
        const Complex r = sm.x(s, t) + sd * sm.u(s, t);
        const auto id = input_denoise(r, tra, hb.beta, rho(s, t));
        x_hat(s, t) = id.x_hat;
        tau_x(s, t) = id.tau_x;
        varpi(s, t) = id.varpi;
        gamma(s, t) = id.gamma;
        tau_gamma(s, t) = id.tau_gamma;
        pbar(s, t) = activity_evidence(r, tra, hb.beta);
      }
    }
    mp_update(pbar, trb, hb.p_a, MpMode::Full, msg);
    rho = msg.p_fwd;

    double mse_sum = 0.0, believed_sum = 0.0;
    RVec mse(T), believed(T);
    for (int t = 0; t < T; ++t) {
      mse(t) = (x_hat.col(t) - sm.x.col(t)).squaredNorm() / S;
      believed(t) = tau_x.col(t).mean();
      mse_sum += mse(t);
      believed_sum += believed(t);
    }
    traj.tnmse_db.push_back(total_pow > 0.0
                                ? 10.0 * std::log10(mse_sum / total_pow)
                                : std::numeric_limits<double>::quiet_NaN());
    traj.tnmse_believed_db.push_back(
        total_pow > 0.0 ? 10.0 * std::log10(believed_sum / total_pow)
                        : std::numeric_limits<double>::quiet_NaN());
    traj.tau_r_mean.push_back(tau_r_alg.mean());
    traj.iterations = i;

    if (em_mode) {
      double s2 = 0.0;
      for (int t = 0; t < T; ++t) {
        const double d = tau_p_alg(t) + hb.sigma2_w;
        s2 += hb.sigma2_w * hb.sigma2_w * (p.sigma2_w + tau_p_true(t)) /
                  (d * d) +
              tau_p_alg(t) * hb.sigma2_w / d;
      }
      hb.sigma2_w = std::max(s2 / T, kVarianceFloor);

      double num = 0.0, den = 0.0;
      for (int t = 0; t < T; ++t)
        for (int s = 0; s < S; ++s) {
          num += varpi(s, t) * (std::norm(gamma(s, t)) + tau_gamma(s, t));
          den += varpi(s, t);
        }
      if (den > 1e-12) hb.beta = std::max(num / den, kVarianceFloor);

      hb.p_a = clamp_learned_prob(msg.kappa.col(0).mean());
      if (T > 1) {
        // trb still holds the transitions the sweep ran with.
        double t_num = 0.0, t_den = 0.0;
        for (int t = 1; t < T; ++t) {
          for (int s = 0; s < S; ++s) {
            const double k_prev = msg.kappa(s, t - 1);
            const double qf = msg.q_fwd(s, t - 1);
            const double pbp = pbar(s, t - 1);
            const double phi = qf * pbp / ((1.0 - qf) * (1.0 - pbp) + qf * pbp);
            const double qb = msg.q_bwd(s, t);
            const double pb = pbar(s, t);
            const double phi_b = qb * pb / ((1.0 - qb) * (1.0 - pb) + qb * pb);
            const double z = trb.p00 * (1.0 - phi) * (1.0 - phi_b) +
                             trb.p01 * (1.0 - phi) * phi_b +
                             trb.p10 * phi * (1.0 - phi_b) +
                             trb.p11 * phi * phi_b;
            t_num += k_prev - trb.p11 * phi * phi_b / z;
            t_den += k_prev;
          }
        }
        if (t_den > 1e-12) {
          const double hi = (1.0 - kLearnedProbFloor) * (1.0 - hb.p_a) / hb.p_a;
          hb.p_10 = clamp_learned_prob(std::min(t_num / t_den, hi));
        }
      }
      trb = derive_transitions(hb.p_a, hb.p_10);
      traj.hyper_trajectory.push_back(hb);
    }

    for (int t = 0; t < T; ++t) {
      tau_p_true(t) = n_over_l * mse(t);
      tau_p_alg(t) = n_over_l * believed(t);
    }

    double rel = 0.0;
    for (int t = 0; t < T; ++t)
      rel = std::max(rel, std::abs(tau_r_alg(t) - tau_r_prev(t)) /
                              std::max(tau_r_alg(t), kVarianceFloor));
    tau_r_prev = tau_r_alg;
    if (i > 1 && rel <= opts.tol) {
      traj.converged = true;
      break;
    }
  }
  return traj;
}

}  // namespace

SeTrajectory se_trajectory_mc(const SystemParams& p, const SeOptions& opts,
                              std::uint64_t seed) {
  return run_se(p, opts, seed, false, 0.0, false);
}

SeTrajectory se_trajectory_mc_em(const SystemParams& p, double snr0_db,
                                 bool noise_term_sigma2, const SeOptions& opts,
                                 std::uint64_t seed) {
  return run_se(p, opts, seed, true, snr0_db, noise_term_sigma2);
}

Snr0Choice select_snr0(const SystemParams& p, const std::vector<double>& grid_db,
                       bool noise_term_sigma2, const SeOptions& opts,
                       std::uint64_t seed) {
  if (grid_db.empty()) throw std::invalid_argument("snr0 grid is empty");
  Snr0Choice out;
  int best = -1;
  bool best_clean = false;
  double best_final = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid_db.size(); ++k) {
    const SeTrajectory tr =
        se_trajectory_mc_em(p, grid_db[k], noise_term_sigma2, opts, seed);
    Snr0Candidate c;
    c.snr0_db = grid_db[k];
    c.converged = tr.converged;
    c.fluctuating = false;
    for (std::size_t i = static_cast<std::size_t>(opts.jump_start_iteration);
         i < tr.tnmse_db.size(); ++i)
      if (tr.tnmse_db[i] - tr.tnmse_db[i - 1] > opts.jump_db)
        c.fluctuating = true;
    c.final_tnmse_db = tr.tnmse_db.empty()
                           ? std::numeric_limits<double>::quiet_NaN()
                           : tr.tnmse_db.back();
    out.table.push_back(c);

    const bool clean = c.converged && !c.fluctuating;
    const double final_v = std::isnan(c.final_tnmse_db)
                               ? std::numeric_limits<double>::infinity()
                               : c.final_tnmse_db;
    if (best < 0 || (clean && !best_clean) ||
        (clean == best_clean && final_v < best_final)) {
      best = static_cast<int>(k);
      best_clean = clean;
      best_final = final_v;
    }
  }
  out.snr0_db = grid_db[static_cast<std::size_t>(best)];
  return out;
}

}  // namespace hygampdcs
