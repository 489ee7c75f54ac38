#pragma once

#include "types.hpp"

namespace hygampdcs {

struct OutputDenoiseResult {
  Complex z0_hat;
  double tau_z;
};

// Posterior mean and variance of z under y = z + w, w ~ CN(0, sigma2_w),
// with pseudo-prior z ~ CN(p_hat, tau_p).
OutputDenoiseResult output_denoise(Complex y, Complex p_hat, double tau_p,
                                   double sigma2_w);

struct InputDenoiseResult {
  Complex x_hat;
  double tau_x;
  double varpi;      // posterior weight of the active branch
  Complex gamma;     // active-branch mean
  double tau_gamma;  // active-branch variance
};

// Bernoulli-Gaussian posterior for x under r_hat = x + CN(0, tau_r), slab
// variance beta and activity prior p_fwd.  tau_x is floored at kVarianceFloor.
InputDenoiseResult input_denoise(Complex r_hat, double tau_r, double beta,
                                 double p_fwd);

// Pr(active | r_hat) under a flat activity prior, i.e. the normalized
// likelihood ratio of the CN(0, tau_r + beta) and CN(0, tau_r) hypotheses.
double activity_evidence(Complex r_hat, double tau_r, double beta);

}  // namespace hygampdcs
