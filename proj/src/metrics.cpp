#include "metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hygampdcs {

double tnmse_db(const CMat& x_hat, const CMat& x_true) {
  if (x_hat.rows() != x_true.rows() || x_hat.cols() != x_true.cols())
    throw std::invalid_argument("shape mismatch");
  const double den = x_true.squaredNorm();
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double num = (x_hat - x_true).squaredNorm();
  if (num == 0.0) return -120.0;
  return std::max(10.0 * std::log10(num / den), -120.0);
}

ByteMat detect_activity(const RMat& kappa, const CMat& x_hat, DetectionRule rule,
                        double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("threshold must be >= 0");
  const Eigen::Index N = x_hat.rows();
  const Eigen::Index T = x_hat.cols();
  if (rule == DetectionRule::PosteriorThreshold &&
      (kappa.rows() != N || kappa.cols() != T))
    throw std::invalid_argument("shape mismatch");
  ByteMat det(N, T);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index n = 0; n < N; ++n) {
      const double v = rule == DetectionRule::PosteriorThreshold
                           ? kappa(n, t)
                           : std::norm(x_hat(n, t));
      det(n, t) = v >= threshold ? 1 : 0;
    }
  }
  return det;
}

double taer(const ByteMat& detected, const ByteMat& truth) {
  if (detected.rows() != truth.rows() || detected.cols() != truth.cols())
    throw std::invalid_argument("shape mismatch");
  long err = 0;
  for (Eigen::Index t = 0; t < truth.cols(); ++t)
    for (Eigen::Index n = 0; n < truth.rows(); ++n)
      if (detected(n, t) != truth(n, t)) ++err;
  return static_cast<double>(err) /
         (static_cast<double>(truth.rows()) * truth.cols());
}

}  // namespace hygampdcs
