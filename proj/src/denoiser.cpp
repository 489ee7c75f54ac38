#include "denoiser.hpp"

#include <cmath>
#include <stdexcept>

#include "constants.hpp"

namespace hygampdcs {

OutputDenoiseResult output_denoise(Complex y, Complex p_hat, double tau_p,
                                   double sigma2_w) {
  if (!(tau_p > 0.0)) throw std::invalid_argument("tau_p must be > 0");
  if (!(sigma2_w >= 0.0)) throw std::invalid_argument("sigma2_w must be >= 0");
  const double den = tau_p + sigma2_w;
  OutputDenoiseResult r;
  r.z0_hat = (y * tau_p + p_hat * sigma2_w) / den;
  r.tau_z = tau_p * sigma2_w / den;
  return r;
}

InputDenoiseResult input_denoise(Complex r_hat, double tau_r, double beta,
                                 double p_fwd) {
  if (!(tau_r > 0.0)) throw std::invalid_argument("tau_r must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  const double p = clamp_prob(p_fwd);
  const double r2 = std::norm(r_hat);
  const double bp = beta + tau_r;
  // log of the inactive/active likelihood-times-prior ratio
  const double u = std::log((1.0 - p) / p) + std::log(bp / tau_r) -
                   r2 * beta / (tau_r * bp);
  InputDenoiseResult out;
  out.varpi = clamp_prob(logistic(-u));
  out.gamma = r_hat * (beta / bp);
  out.tau_gamma = beta * tau_r / bp;
  out.x_hat = out.varpi * out.gamma;
  const double g2 = std::norm(out.gamma);
  out.tau_x = out.varpi * ((1.0 - out.varpi) * g2 + out.tau_gamma);
  if (out.tau_x < kVarianceFloor) out.tau_x = kVarianceFloor;
  return out;
}

double activity_evidence(Complex r_hat, double tau_r, double beta) {
  if (!(tau_r > 0.0)) throw std::invalid_argument("tau_r must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  const double r2 = std::norm(r_hat);
  const double bp = beta + tau_r;
  const double ell = std::log(bp / tau_r) - r2 * beta / (tau_r * bp);
  return clamp_prob(logistic(-ell));
}

}  // namespace hygampdcs
