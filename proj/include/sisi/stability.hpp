#pragma once

// Linear stability of fixed points: Jacobian of the operator, its spectrum,
// and the attracting / repelling / saddle / nonhyperbolic classification.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>

#include "sisi/error.hpp"
#include "sisi/model.hpp"

namespace sisi {

struct JacobianMatrix {
  std::array<std::array<double, 4>, 4> m{};

  double operator()(int r, int c) const { return m[r][c]; }
  double& operator()(int r, int c) { return m[r][c]; }

  static JacobianMatrix identity() {
    JacobianMatrix j;
    for (int i = 0; i < 4; ++i) j.m[i][i] = 1.0;
    return j;
  }
};

/// Partial derivatives of the raw operator at an arbitrary point of R^4.
inline JacobianMatrix jacobian_raw(const Vec4& s, const ModelParams& p) {
  const double x = s[0], u = s[1], y = s[2], v = s[3];
  const double a = p.k1 * u + p.k2 * v;
  JacobianMatrix j;
  j.m[0] = {1 - p.b - p.beta1 * a, -p.beta1 * p.k1 * x, 0.0, -p.beta1 * p.k2 * x};
  j.m[1] = {p.beta1 * a, 1 - p.b - p.alpha + p.beta1 * p.k1 * x, 0.0, p.beta1 * p.k2 * x};
  j.m[2] = {0.0, p.alpha - p.beta2 * p.k1 * y, 1 - p.b - p.beta2 * a, -p.beta2 * p.k2 * y};
  j.m[3] = {0.0, p.beta2 * p.k1 * y, p.beta2 * a, 1 - p.b + p.beta2 * p.k2 * y};
  return j;
}

inline JacobianMatrix jacobian(const SimplexPoint& s, const ModelParams& p) { return jacobian_raw(s.coords(), p); }

/// Coefficients c[0..4] of det(mu*I - J) = sum_i c[i] mu^i (c[4] == 1), by the
/// Faddeev-LeVerrier recursion.
inline std::array<double, 5> characteristic_polynomial(const JacobianMatrix& j) {
  using M = std::array<std::array<double, 4>, 4>;
  auto mul = [](const M& a, const M& b) {
    M r{};
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k)
        for (int c = 0; c < 4; ++c) r[i][c] += a[i][k] * b[k][c];
    return r;
  };
  std::array<double, 5> c{};
  c[4] = 1.0;
  M mk{};  // M_0 = 0
  for (int k = 1; k <= 4; ++k) {
    M am = mul(j.m, mk);
    for (int i = 0; i < 4; ++i) am[i][i] += c[4 - k + 1];
    mk = am;  // M_k = J M_{k-1} + c_{n-k+1} I
    const M jm = mul(j.m, mk);
    const double trace = jm[0][0] + jm[1][1] + jm[2][2] + jm[3][3];
    c[4 - k] = -trace / k;
  }
  return c;
}

/// |charpoly(mu)| divided by sum_i |c_i| r^i, r = max(|mu|, radius). The
/// radius bounds the spectrum, so round-off in c_0 near a zero eigenvalue
/// does not dominate the scale.
inline double scaled_charpoly_residual(const std::array<double, 5>& c, std::complex<double> mu, double radius = 0.0) {
  std::complex<double> value = 0.0;
  double scale = 0.0;
  const double r = std::max(std::abs(mu), radius);
  for (int i = 4; i >= 0; --i) {
    value = value * mu + c[i];
    scale += std::abs(c[i]) * std::pow(r, i);
  }
  return scale > 0.0 ? std::abs(value) / scale : std::abs(value);
}

using Spectrum = std::array<std::complex<double>, 4>;

/// Eigenvalues sorted by decreasing modulus, then decreasing real part, then
/// decreasing imaginary part. Each one is cross-checked against the
/// characteristic polynomial; a failed check raises NonConvergence.
inline Spectrum eigenvalues(const JacobianMatrix& j) {
  Eigen::Matrix4d a;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      if (!std::isfinite(j(r, c))) throw Error(ErrorKind::NonConvergence, "non-finite Jacobian entry");
      a(r, c) = j(r, c);
    }
  Eigen::EigenSolver<Eigen::Matrix4d> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NonConvergence, "real Schur iteration did not converge");
  }
  Spectrum out;
  for (int i = 0; i < 4; ++i) out[i] = solver.eigenvalues()[i];
  std::sort(out.begin(), out.end(), [](std::complex<double> l, std::complex<double> r) {
    if (std::abs(l) != std::abs(r)) return std::abs(l) > std::abs(r);
    if (l.real() != r.real()) return l.real() > r.real();
    return l.imag() > r.imag();
  });
  const auto coeffs = characteristic_polynomial(j);
  double radius = 0.0;  // max absolute row sum
  for (int r = 0; r < 4; ++r)
    radius = std::max(radius, std::abs(j(r, 0)) + std::abs(j(r, 1)) + std::abs(j(r, 2)) + std::abs(j(r, 3)));
  for (const auto& mu : out) {
    const double res = scaled_charpoly_residual(coeffs, mu, radius);
    if (res > 1e-8) {
      throw Error(ErrorKind::NonConvergence,
                  "eigenvalue (" + std::to_string(mu.real()) + "," + std::to_string(mu.imag()) +
                      ") fails the characteristic polynomial check, residual " + std::to_string(res));
    }
  }
  return out;
}

enum class StabilityClass { Attracting, Repelling, Saddle, Nonhyperbolic };

inline const char* to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::Attracting: return "attracting";
    case StabilityClass::Repelling: return "repelling";
    case StabilityClass::Saddle: return "saddle";
    case StabilityClass::Nonhyperbolic: return "nonhyperbolic";
  }
  return "?";
}

inline constexpr double kUnitCircleTolerance = 1e-10;

inline StabilityClass classify(const Spectrum& spectrum, double unit_tol = kUnitCircleTolerance) {
  bool all_inside = true;
  bool all_outside = true;
  for (const auto& mu : spectrum) {
    const double r = std::abs(mu);
    if (std::abs(r - 1.0) <= unit_tol) return StabilityClass::Nonhyperbolic;
    all_inside = all_inside && r < 1.0;
    all_outside = all_outside && r > 1.0;
  }
  if (all_inside) return StabilityClass::Attracting;
  if (all_outside) return StabilityClass::Repelling;
  return StabilityClass::Saddle;
}

struct StabilityReport {
  StabilityClass cls = StabilityClass::Nonhyperbolic;
  Spectrum eigenvalues{};
  // Only the type of the disease-free vertex (1,0,0,0) has a closed-form
  // rule; classifications of other points come from the generic spectrum.
  bool in_scope = false;
};

/// Closed-form rule for the vertex (1,0,0,0). The spectrum is computed too,
/// through the generic path, so callers can compare the two.
inline StabilityReport classify_lambda1(const ModelParams& p) {
  require_admissible(p);
  const double threshold = p.b + p.alpha;
  const double infect = p.beta1 * p.k1;
  StabilityReport r;
  if (std::abs(p.b) <= tol::kIdentity || std::abs(infect - threshold) <= tol::kIdentity) {
    r.cls = StabilityClass::Nonhyperbolic;
  } else if (infect < threshold) {
    r.cls = StabilityClass::Attracting;
  } else {
    r.cls = StabilityClass::Saddle;
  }
  r.eigenvalues = eigenvalues(jacobian(SimplexPoint(1, 0, 0, 0), p));
  r.in_scope = true;
  return r;
}

inline StabilityReport classify_point(const SimplexPoint& s, const ModelParams& p) {
  StabilityReport r;
  r.eigenvalues = eigenvalues(jacobian(s, p));
  r.cls = classify(r.eigenvalues);
  r.in_scope = distance(s, SimplexPoint(1, 0, 0, 0)) == 0.0;
  return r;
}

}  // namespace sisi
