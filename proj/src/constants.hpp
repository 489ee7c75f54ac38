#pragma once

#include <algorithm>
#include <cmath>

namespace hygampdcs {

inline constexpr double kProbFloor = 1e-12;        // clamp for messages and evidence
inline constexpr double kLearnedProbFloor = 1e-6;  // clamp for learned probabilities
inline constexpr double kVarianceFloor = 1e-15;    // floor for tau_x and tau_s
inline constexpr double kNormGuard = 1e-30;        // stop-rule denominator guard

inline double clamp_prob(double p) {
  return std::clamp(p, kProbFloor, 1.0 - kProbFloor);
}

inline double clamp_learned_prob(double p) {
  return std::clamp(p, kLearnedProbFloor, 1.0 - kLearnedProbFloor);
}

// 1 / (1 + exp(-t)) without overflow on either tail.
inline double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace hygampdcs
