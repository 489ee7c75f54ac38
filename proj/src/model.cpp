#include "model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rng.hpp"

namespace hygampdcs {

Transitions derive_transitions(double p_a, double p_10) {
  if (!(p_a > 0.0 && p_a < 1.0))
    throw std::invalid_argument("p_a must lie in (0,1)");
  if (!(p_10 >= 0.0 && p_10 <= 1.0))
    throw std::invalid_argument("p_10 must lie in [0,1]");
  Transitions t;
  t.p10 = p_10;
  t.p11 = 1.0 - p_10;
  t.p01 = p_a * p_10 / (1.0 - p_a);
  if (t.p01 > 1.0)
    throw std::invalid_argument("p_a and p_10 imply p_01 > 1");
  t.p00 = 1.0 - t.p01;
  return t;
}

void SystemParams::validate() const {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  if (!(sigma2_w >= 0.0)) throw std::invalid_argument("sigma2_w must be >= 0");
  derive_transitions(p_a, p_10);  // validates p_a, p_10 and the implied p_01
}

double SystemParams::snr_db() const {
  return 10.0 * std::log10(beta / sigma2_w);
}

double SystemParams::sigma2_for_snr_db(double beta, double snr_db) {
  return beta * std::pow(10.0, -snr_db / 10.0);
}

GroundTruth sample_ground_truth(const SystemParams& p, std::uint64_t seed) {
  p.validate();
  const Transitions tr = derive_transitions(p.p_a, p.p_10);

  GroundTruth g;
  g.activity.resize(p.N, p.T);
  g.gains.resize(p.N, p.T);
  g.signal.resize(p.N, p.T);

  auto act_eng = make_engine(seed, "activity");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int n = 0; n < p.N; ++n) {
    std::uint8_t prev = unif(act_eng) < p.p_a ? 1 : 0;
    g.activity(n, 0) = prev;
    for (int t = 1; t < p.T; ++t) {
      const double p_on = prev ? tr.p11 : tr.p01;
      prev = unif(act_eng) < p_on ? 1 : 0;
      g.activity(n, t) = prev;
    }
  }

  auto gain_eng = make_engine(seed, "channel");
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < p.T; ++t)
    for (int n = 0; n < p.N; ++n)
      g.gains(n, t) = sample_cn(gain_eng, p.beta, unit);

  g.signal = g.activity.cast<double>().cast<Complex>().cwiseProduct(g.gains);
  return g;
}

CMat generate_pilots(const SystemParams& p, std::uint64_t seed) {
  p.validate();
  CMat A(p.L, p.N);
  auto eng = make_engine(seed, "pilots");
  std::normal_distribution<double> unit(0.0, 1.0);
  const double var = 1.0 / static_cast<double>(p.L);
  for (int n = 0; n < p.N; ++n)
    for (int l = 0; l < p.L; ++l)
      A(l, n) = sample_cn(eng, var, unit);
  if (p.pilot_norm == PilotNormalization::UnitColumn) {
    for (int n = 0; n < p.N; ++n) {
      const double norm = A.col(n).norm();
      if (norm > 0.0) A.col(n) /= norm;
    }
  } else {
    for (int n = 0; n < p.N; ++n)
      for (int l = 0; l < p.L; ++l) {
        const double mag = std::abs(A(l, n));
        A(l, n) = mag > 0.0 ? A(l, n) / mag : Complex(1.0, 0.0);
      }
  }
  return A;
}

CMat synthesize_received(const CMat& pilots, const GroundTruth& truth,
                         const SystemParams& p, std::uint64_t seed) {
  if (pilots.rows() != p.L || pilots.cols() != p.N)
    throw std::invalid_argument("pilot matrix shape does not match params");
  if (truth.signal.rows() != p.N || truth.signal.cols() != p.T)
    throw std::invalid_argument("ground truth shape does not match params");
  CMat Y = pilots * truth.signal;
  auto eng = make_engine(seed, "noise");
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < p.T; ++t)
    for (int l = 0; l < p.L; ++l)
      Y(l, t) += sample_cn(eng, p.sigma2_w, unit);
  return Y;
}

}  // namespace hygampdcs
