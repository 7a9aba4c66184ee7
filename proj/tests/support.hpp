#pragma once

// Random draws shared by the property tests.

#include <cstdint>
#include <random>

#include "sisi/model.hpp"

namespace sisi::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// Non-negative parameters over ranges wide enough to leave the admissible
/// set often. Each field is zero with probability `zero_prob`.
inline ModelParams random_nonnegative(Rng& rng, double zero_prob = 0.15) {
  auto draw = [&](double hi) {
    return std::bernoulli_distribution(zero_prob)(rng) ? 0.0 : uniform(rng, 0.0, hi);
  };
  ModelParams p;
  p.b = draw(1.0);
  p.alpha = draw(1.0);
  p.beta1 = draw(2.5);
  p.beta2 = draw(2.5);
  p.k1 = draw(2.0);
  p.k2 = draw(2.0);
  return p;
}

inline ModelParams random_admissible(Rng& rng, double zero_prob = 0.15) {
  for (;;) {
    const ModelParams p = random_nonnegative(rng, zero_prob);
    if (p.admissible()) return p;
  }
}

/// Dirichlet(1,1,1,1) point; with some probability a random face of it.
inline SimplexPoint random_point(Rng& rng, double face_prob = 0.2) {
  std::exponential_distribution<double> e(1.0);
  for (;;) {
    Vec4 c{};
    double sum = 0.0;
    for (auto& ci : c) {
      ci = std::bernoulli_distribution(face_prob)(rng) ? 0.0 : e(rng);
      sum += ci;
    }
    if (sum == 0.0) continue;
    for (auto& ci : c) ci /= sum;
    c[3] = 1.0 - (c[0] + c[1] + c[2]);
    if (c[3] < 0.0) c[3] = 0.0;
    return SimplexPoint(c);
  }
}

inline bool near(const Vec4& a, const Vec4& b, double tol) { return max_abs_diff(a, b) <= tol; }

}  // namespace sisi::test
