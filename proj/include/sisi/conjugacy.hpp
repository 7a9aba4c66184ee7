#pragma once

// One-dimensional reduction of the alpha = k2 = 0 dynamics.
//
// On the face y = v = 0 the operator reduces to W(x,u); after normalizing to
// x + u = 1 the x-coordinate follows the quadratic map
//   f(x) = b + (1 - b - c) x + c x^2,   c = beta1 k1,
// which is linearly conjugate to the logistic map F_mu(x) = mu x (1 - x) with
// mu = c - b + 1 through h(x) = p x + q, p = -mu/c, q = 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "sisi/error.hpp"
#include "sisi/model.hpp"
#include "sisi/stability.hpp"

namespace sisi {

inline double logistic(double mu, double x) { return mu * x * (1.0 - x); }

struct QuadraticMap1D {
  double b = 0.0;
  double c = 0.0;  // beta1 * k1

  double operator()(double x) const { return b + (1.0 - b - c) * x + c * x * x; }
  double derivative(double x) const { return 1.0 - b - c + 2.0 * c * x; }

  double p1() const { return 1.0; }
  double p2() const { return b / c; }
};

inline QuadraticMap1D quadratic_map(const ModelParams& p) { return {p.b, p.beta1 * p.k1}; }

enum class ConjugacyRoot { One, Ratio };  // q = 1 or q = b/(beta1 k1)

struct ConjugacyMap {
  double mu = 0.0;
  double p = 0.0;
  double q = 1.0;
  bool mu_in_range = false;  // 1 < mu < 3

  double h(double x) const { return p * x + q; }
};

/// Linear conjugacy h with h(F_mu(x)) = f(h(x)). The default root q = 1 gives
/// mu = c - b + 1; the other root q = b/c gives mu = 1 + b - c and is kept
/// for exploration only.
inline ConjugacyMap conjugacy_map(double b, double c, ConjugacyRoot root = ConjugacyRoot::One) {
  if (!(c > 0.0)) throw Error(ErrorKind::DegenerateRegime, "beta1*k1 must be > 0");
  ConjugacyMap m;
  m.q = root == ConjugacyRoot::One ? 1.0 : b / c;
  m.mu = 2.0 * c * m.q + 1.0 - b - c;
  m.p = -m.mu / c;
  m.mu_in_range = m.mu > 1.0 && m.mu < 3.0;
  return m;
}

inline ConjugacyMap conjugacy_map(const ModelParams& p, ConjugacyRoot root = ConjugacyRoot::One) {
  return conjugacy_map(p.b, p.beta1 * p.k1, root);
}

/// Roots of c q^2 - (b + c) q + b = 0, ascending.
inline std::pair<double, double> conjugacy_roots(double b, double c) {
  const double r1 = 1.0, r2 = b / c;
  return {std::min(r1, r2), std::max(r1, r2)};
}

inline void require_restricted_regime(const ModelParams& p) {
  if (p.alpha != 0.0 || p.k2 != 0.0) {
    throw Error(ErrorKind::WrongRegime, "the planar reduction needs alpha = 0 and k2 = 0");
  }
}

inline std::pair<double, double> restrict_W(double x, double u, const ModelParams& p) {
  require_restricted_regime(p);
  if (x < 0.0 || u < 0.0) throw Error(ErrorKind::DegenerateInput, "x and u must be >= 0");
  const double c = p.beta1 * p.k1;
  return {x + p.b - p.b * x - c * u * x, u - p.b * u + c * u * x};
}

/// W divided by x + u + b - b(x+u), so the image satisfies x' + u' = 1.
inline std::pair<double, double> normalized_W0(double x, double u, const ModelParams& p) {
  const auto [wx, wu] = restrict_W(x, u, p);
  const double s = x + u;
  if (!(s > 0.0)) throw Error(ErrorKind::DegenerateInput, "x + u must be > 0");
  const double denom = s + p.b - p.b * s;
  if (!(denom > 0.0)) throw Error(ErrorKind::DegenerateInput, "normalizing denominator is not positive");
  return {wx / denom, wu / denom};
}

struct ConjugacyCheck {
  ConjugacyMap map;
  double sup_norm = 0.0;
  bool pass = false;
};

inline constexpr double kConjugacyTolerance = 1e-12;

/// sup over a uniform grid of [0,1] (grid_size points, endpoints included) of
/// |h(F_mu(x)) - f(h(x))|.
inline ConjugacyCheck verify_conjugacy(double b, double c, int grid_size,
                                       ConjugacyRoot root = ConjugacyRoot::One) {
  ConjugacyCheck out{conjugacy_map(b, c, root), 0.0, false};
  const QuadraticMap1D f{b, c};
  const int n = std::max(grid_size, 2);
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / (n - 1);
    const double lhs = out.map.h(logistic(out.map.mu, x));
    const double rhs = f(out.map.h(x));
    out.sup_norm = std::max(out.sup_norm, std::abs(lhs - rhs));
  }
  out.pass = out.sup_norm <= kConjugacyTolerance;
  return out;
}

inline ConjugacyCheck verify_conjugacy(const ModelParams& p, int grid_size) {
  return verify_conjugacy(p.b, p.beta1 * p.k1, grid_size);
}

struct FixedPoint1D {
  double location = 0.0;
  double derivative = 0.0;
  StabilityClass cls = StabilityClass::Nonhyperbolic;
  bool in_unit_interval = false;
};

inline StabilityClass classify_multiplier(double m) {
  const double r = std::abs(m);
  if (std::abs(r - 1.0) <= kUnitCircleTolerance) return StabilityClass::Nonhyperbolic;
  return r < 1.0 ? StabilityClass::Attracting : StabilityClass::Repelling;
}

/// p1 = 1 with f'(1) = 1 - b + c, and p2 = b/c with f'(b/c) = 1 + b - c.
inline std::array<FixedPoint1D, 2> classify_1d_fixed_points(const ModelParams& p) {
  const auto f = quadratic_map(p);
  if (!(f.c > 0.0)) throw Error(ErrorKind::DegenerateRegime, "beta1*k1 must be > 0");
  std::array<FixedPoint1D, 2> out;
  for (int i = 0; i < 2; ++i) {
    const double loc = i == 0 ? f.p1() : f.p2();
    const double d = f.derivative(loc);
    out[i] = {loc, d, classify_multiplier(d), loc >= 0.0 && loc <= 1.0 + tol::kIdentity};
  }
  return out;
}

}  // namespace sisi
