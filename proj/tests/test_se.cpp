#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "../src/se.hpp"
#include "doctest.h"

using namespace hygampdcs;

namespace {

double trapezoid_psi(double b, double rho0, int points) {
  const double c = (1.0 / rho0 - 1.0) * (1.0 + b);
  const double hi = 32.0;
  const double h = hi / (points - 1);
  double acc = 0.0;
  for (int k = 0; k < points; ++k) {
    const double s = k * h;
    const double f = s * std::exp(-s) / (1.0 + c * std::exp(-b * s));
    acc += (k == 0 || k == points - 1) ? 0.5 * f : f;
  }
  return acc * h;
}

SystemParams base_params() {
  SystemParams p;
  p.N = 1000;
  p.L = 300;
  p.T = 1;
  p.p_a = 0.1;
  p.p_10 = 0.9;
  p.beta = 1.0;
  p.sigma2_w = 0.1;
  return p;
}

double scalar_fixed_point(const SystemParams& p) {
  double tau =
      p.sigma2_w + static_cast<double>(p.N) / p.L * p.p_a * p.beta;
  for (int i = 0; i < 2000; ++i) {
    const double next = se_step(tau, p).tau_r_next;
    if (std::abs(next - tau) <= 1e-13 * tau) return next;
    tau = next;
  }
  return tau;
}

}  // namespace

TEST_CASE("psi boundary identities") {
  for (double rho : {0.05, 0.1, 0.3, 0.7}) {
    CHECK(std::abs(se_psi(0.0, rho) - rho) <= 1e-10);
    CHECK(std::abs(se_psi(1e8, rho) - 1.0) <= 1e-10);
  }
  CHECK_THROWS(se_psi(-1.0, 0.1));
  CHECK_THROWS(se_psi(1.0, 0.0));
  CHECK_THROWS(se_psi(1.0, 1.0));
}

TEST_CASE("psi agrees with a dense trapezoid evaluation") {
  for (double b : {0.5, 3.0, 20.0, 100.0})
    for (double rho : {0.1, 0.3}) {
      const double got = se_psi(b, rho);
      const double ref = trapezoid_psi(b, rho, 100001);
      CAPTURE(b);
      CAPTURE(rho);
      CHECK(std::abs(got - ref) <= 1e-6);
    }
}

TEST_CASE("psi is monotone in its argument and stays in [rho0, 1]") {
  const double rho = 0.15;
  double prev = se_psi(0.0, rho);
  for (double b : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 1000.0}) {
    const double v = se_psi(b, rho);
    CHECK(v >= prev - 1e-12);
    CHECK(v >= rho - 1e-10);
    CHECK(v <= 1.0 + 1e-10);
    prev = v;
  }
}

TEST_CASE("expected posterior variance has the right limits") {
  const double beta = 1.0, rho = 0.1;
  CHECK(se_expected_tau_x(1e-9, beta, rho) <= 1e-9);
  CHECK(se_expected_tau_x(1e-9, beta, rho) >= 0.0);
  CHECK(std::abs(se_expected_tau_x(1e9, beta, rho) - rho * beta) <= 1e-8);

  double prev = 0.0;
  for (double tr : {1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0}) {
    const double v = se_expected_tau_x(tr, beta, rho);
    CHECK(v >= prev - 1e-14);
    CHECK(v <= rho * beta + 1e-12);
    prev = v;
  }
  CHECK_THROWS(se_expected_tau_x(0.0, beta, rho));
}

TEST_CASE("scalar recursion settles on a self-consistent noise level") {
  const SystemParams p = base_params();
  const double tau = scalar_fixed_point(p);
  const SeStep s = se_step(tau, p);
  CHECK(std::abs(s.tau_r_next - tau) <= 1e-10 * tau);
  CHECK(tau >= p.sigma2_w);
  CHECK(tau <= p.sigma2_w + static_cast<double>(p.N) / p.L * p.p_a * p.beta);
}

TEST_CASE("sampled single-frame recursion matches the scalar one") {
  const SystemParams p = base_params();
  SeOptions opts;
  opts.samples = 400000;
  opts.max_iterations = 200;
  const SeTrajectory tr = se_trajectory_mc(p, opts, 4001);
  REQUIRE(tr.converged);
  const double mc = tr.tau_r_mean.back();
  const double scalar = scalar_fixed_point(p);
  CAPTURE(mc);
  CAPTURE(scalar);
  CHECK(std::abs(mc - scalar) / scalar <= 0.02);
  // With matched statistics the realized and believed errors agree.
  CHECK(std::abs(tr.tnmse_db.back() - tr.tnmse_believed_db.back()) <= 0.5);
  // The trajectory improves overall.
  CHECK(tr.tnmse_db.back() < tr.tnmse_db.front());
}

TEST_CASE("sampled trajectories are deterministic in the seed") {
  SystemParams p = base_params();
  p.T = 4;
  p.p_10 = 0.25;
  SeOptions opts;
  opts.samples = 20000;
  const SeTrajectory a = se_trajectory_mc(p, opts, 77);
  const SeTrajectory b = se_trajectory_mc(p, opts, 77);
  REQUIRE(a.tnmse_db.size() == b.tnmse_db.size());
  for (std::size_t i = 0; i < a.tnmse_db.size(); ++i) {
    CHECK(a.tnmse_db[i] == b.tnmse_db[i]);
    CHECK(a.tau_r_mean[i] == b.tau_r_mean[i]);
  }
  const SeTrajectory c = se_trajectory_mc(p, opts, 78);
  CHECK(a.tnmse_db.back() != c.tnmse_db.back());
}

TEST_CASE("learned-statistics recursion recovers the known-statistics error") {
  SystemParams p = base_params();
  p.T = 2;
  p.p_10 = 0.25;
  SeOptions opts;
  opts.samples = 50000;
  opts.max_iterations = 150;
  const SeTrajectory known = se_trajectory_mc(p, opts, 90);
  const double true_snr_db = 10.0 * std::log10(p.beta / p.sigma2_w);
  const SeTrajectory em =
      se_trajectory_mc_em(p, true_snr_db, false, opts, 90);
  REQUIRE(known.converged);
  CHECK(em.converged);
  CHECK(std::abs(em.tnmse_db.back() - known.tnmse_db.back()) <= 2.0);
  CHECK(em.hyper_trajectory.size() ==
        static_cast<std::size_t>(em.iterations) + 1);
  // The learned noise level should drift toward the truth.
  const Hyperparams& last = em.hyper_trajectory.back();
  CHECK(last.sigma2_w > 0.0);
  CHECK(std::abs(last.p_a - p.p_a) <= 0.05);
}

TEST_CASE("initialization guess selection prefers the benign trajectory") {
  SystemParams p = base_params();
  p.T = 2;
  p.p_10 = 0.25;
  p.sigma2_w = 1.0;  // 0 dB
  SeOptions opts;
  opts.samples = 20000;
  opts.max_iterations = 60;
  const std::vector<double> grid{0.0, 30.0};
  const Snr0Choice choice = select_snr0(p, grid, false, opts, 91);
  REQUIRE(choice.table.size() == 2);
  CHECK(choice.table[0].snr0_db == 0.0);
  CHECK(choice.table[1].snr0_db == 30.0);
  CHECK(choice.snr0_db == 0.0);
  CHECK_THROWS(select_snr0(p, {}, false, opts, 91));
}
