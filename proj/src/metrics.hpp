#pragma once

#include "types.hpp"

namespace hygampdcs {

// 10 log10(||x_hat - x||_F^2 / ||x||_F^2), floored at -120 dB.
// Returns NaN when the reference block is all zero.
double tnmse_db(const CMat& x_hat, const CMat& x_true);

enum class DetectionRule { PosteriorThreshold, PowerThreshold };

// PosteriorThreshold compares the activity posterior against the threshold;
// PowerThreshold compares |x_hat|^2.
ByteMat detect_activity(const RMat& kappa, const CMat& x_hat, DetectionRule rule,
                        double threshold);

// (misses + false alarms) / (N * T).
double taer(const ByteMat& detected, const ByteMat& truth);

}  // namespace hygampdcs
