#pragma once

#include <cstdint>
#include <vector>

#include "em.hpp"
#include "model.hpp"
#include "types.hpp"

namespace hygampdcs {

// psi(b) = int_0^inf s exp(-s) / (1 + (1/rho0 - 1)(1 + b) exp(-b s)) ds.
// Adaptive quadrature; psi(0) = rho0 and psi -> 1 as b -> inf.
double se_psi(double b, double rho0);

// Large-system average posterior variance of the scalar channel at noise
// level tau_r, slab variance beta and activity fraction rho0.
double se_expected_tau_x(double tau_r, double beta, double rho0);

struct SeStep {
  double e_tau_x;
  double tau_r_next;
};

// One step of the scalar recursion with the stationary activity fraction.
SeStep se_step(double tau_r, const SystemParams& p);

struct SeOptions {
  int samples = 100000;
  int max_iterations = 100;
  double tol = 1e-8;             // relative change of tau_r across iterations
  double jump_db = 0.5;          // TNMSE increase that counts as a fluctuation
  int jump_start_iteration = 5;  // earliest iteration at which jumps count
};

struct SeTrajectory {
  std::vector<double> tnmse_db;           // realized error per iteration
  std::vector<double> tnmse_believed_db;  // posterior-variance based
  std::vector<double> tau_r_mean;         // mean over frames (algorithm's value)
  bool converged = false;
  int iterations = 0;
  std::vector<Hyperparams> hyper_trajectory;  // EM mode only
};

// Sample-based state evolution of the full block algorithm with known
// statistics: per-frame noise levels, per-sample activity priors updated by
// the chain sweep.  Deterministic for a fixed seed (common random numbers).
SeTrajectory se_trajectory_mc(const SystemParams& p, const SeOptions& opts,
                              std::uint64_t seed);

// Same recursion but the denoiser and chain run on learned statistics that are
// refreshed by moment-matched M-steps, starting from the data-driven
// initialization at guess snr0_db.
SeTrajectory se_trajectory_mc_em(const SystemParams& p, double snr0_db,
                                 bool noise_term_sigma2, const SeOptions& opts,
                                 std::uint64_t seed);

struct Snr0Candidate {
  double snr0_db;
  bool converged;
  bool fluctuating;
  double final_tnmse_db;
};

struct Snr0Choice {
  double snr0_db;
  std::vector<Snr0Candidate> table;
};

// Picks the initialization SNR guess whose predicted trajectory converges
// without late TNMSE jumps and reaches the lowest final TNMSE.
Snr0Choice select_snr0(const SystemParams& p, const std::vector<double>& grid_db,
                       bool noise_term_sigma2, const SeOptions& opts,
                       std::uint64_t seed);

}  // namespace hygampdcs
