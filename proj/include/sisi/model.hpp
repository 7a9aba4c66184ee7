#pragma once

// Discrete-time SISI evolution operator on the 3-simplex.
//
// State (x, u, y, v) holds the population fractions of susceptibles (S),
// first-time infected (I), recovered (S1) and second-time infected (I1).
// Birth and death rates coincide, so the population size is constant and the
// state stays on the simplex whenever the parameters are admissible.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sisi/error.hpp"

namespace sisi {

namespace tol {
inline constexpr double kIdentity = 1e-12;     // algebraic identities
inline constexpr double kFixedPoint = 1e-10;   // fixed-point residuals
inline constexpr double kLimit = 1e-6;         // trajectory limits
inline constexpr double kClamp = 1e-12;        // tolerated negative round-off
inline constexpr double kTrajectory = 1e-10;   // drift allowed along an orbit
}  // namespace tol

using Vec4 = std::array<double, 4>;

struct ModelParams {
  double b = 0.0;      // birth rate == death rate
  double alpha = 0.0;  // recovery rate
  double beta1 = 0.0;  // susceptibility in S
  double beta2 = 0.0;  // susceptibility in S1
  double k1 = 0.0;     // infectivity of I
  double k2 = 0.0;     // infectivity of I1

  bool admissible() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// One of the nine inequalities under which the operator maps the simplex
/// into itself.
struct Violation {
  int id = 0;             // 1..9, in the order listed by admissibility_conditions()
  std::string condition;  // e.g. "alpha+b<=1"
  double value = 0.0;     // left-hand side
  double bound = 0.0;
};

struct AdmissibilityReport {
  std::vector<Violation> violations;

  bool admissible() const { return violations.empty(); }
};

struct Condition {
  int id;
  const char* text;
  double (*lhs)(const ModelParams&);
  double bound;
};

inline const std::array<Condition, 9>& admissibility_conditions() {
  static const std::array<Condition, 9> conditions{{
      {1, "alpha+b<=1", [](const ModelParams& p) { return p.alpha + p.b; }, 1.0},
      {2, "beta1*k2<=2", [](const ModelParams& p) { return p.beta1 * p.k2; }, 2.0},
      {3, "beta2*k1<=2", [](const ModelParams& p) { return p.beta2 * p.k1; }, 2.0},
      {4, "b+beta2*k2<=1", [](const ModelParams& p) { return p.b + p.beta2 * p.k2; }, 1.0},
      {5, "|b-beta1*k1|<=1", [](const ModelParams& p) { return std::abs(p.b - p.beta1 * p.k1); }, 1.0},
      {6, "|b-beta2*k2|<=1", [](const ModelParams& p) { return std::abs(p.b - p.beta2 * p.k2); }, 1.0},
      {7, "|b-beta1*k2|<=1", [](const ModelParams& p) { return std::abs(p.b - p.beta1 * p.k2); }, 1.0},
      {8, "|alpha+b-beta1*k1|<=1",
       [](const ModelParams& p) { return std::abs(p.alpha + p.b - p.beta1 * p.k1); }, 1.0},
      {9, "|alpha-b-beta2*k1|<=1",
       [](const ModelParams& p) { return std::abs(p.alpha - p.b - p.beta2 * p.k1); }, 1.0},
  }};
  return conditions;
}

inline void require_non_negative(const ModelParams& p) {
  const std::array<std::pair<const char*, double>, 6> fields{{{"b", p.b},
                                                             {"alpha", p.alpha},
                                                             {"beta1", p.beta1},
                                                             {"beta2", p.beta2},
                                                             {"k1", p.k1},
                                                             {"k2", p.k2}}};
  for (const auto& [name, value] : fields) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw Error(ErrorKind::NegativeParameter,
                  std::string(name) + " = " + std::to_string(value) + " must be a finite value >= 0");
    }
  }
}

/// Checks the nine admissibility inequalities. Values that exceed a bound by
/// no more than tol::kIdentity count as satisfied (decimal inputs such as
/// 0.7 + 0.3 do not land exactly on the bound).
inline AdmissibilityReport validate_params(const ModelParams& p) {
  require_non_negative(p);
  AdmissibilityReport report;
  for (const auto& c : admissibility_conditions()) {
    const double lhs = c.lhs(p);
    if (lhs > c.bound + tol::kIdentity) {
      report.violations.push_back({c.id, c.text, lhs, c.bound});
    }
  }
  return report;
}

inline bool ModelParams::admissible() const { return validate_params(*this).admissible(); }

inline void require_admissible(const ModelParams& p) {
  const auto report = validate_params(p);
  if (!report.admissible()) {
    std::string msg = "violated:";
    for (const auto& v : report.violations) msg += " " + v.condition;
    throw Error(ErrorKind::InadmissibleParams, msg);
  }
}

class SimplexPoint {
 public:
  SimplexPoint() : c_{1.0, 0.0, 0.0, 0.0} {}

  /// Checked construction: coordinates in [-1e-12, 0) are clamped to zero,
  /// anything more negative or a coordinate sum off by more than 1e-12 is
  /// rejected.
  SimplexPoint(double x, double u, double y, double v) : SimplexPoint(Vec4{x, u, y, v}) {}

  explicit SimplexPoint(const Vec4& c) : c_(c) {
    double sum = 0.0;
    for (auto& ci : c_) {
      if (!std::isfinite(ci) || ci < -tol::kClamp) {
        throw Error(ErrorKind::InvalidPoint, "coordinate " + std::to_string(ci) + " is not >= 0");
      }
      ci = std::max(ci, 0.0);
      sum += ci;
    }
    if (std::abs(sum - 1.0) > tol::kIdentity) {
      throw Error(ErrorKind::InvalidPoint, "coordinates sum to " + std::to_string(sum) + ", not 1");
    }
  }

  /// No validation. Used for operator images, whose simplex membership is a
  /// property of the model and is measured rather than enforced.
  static SimplexPoint unchecked(const Vec4& c) {
    SimplexPoint s;
    s.c_ = c;
    return s;
  }

  double x() const { return c_[0]; }
  double u() const { return c_[1]; }
  double y() const { return c_[2]; }
  double v() const { return c_[3]; }
  double operator[](std::size_t i) const { return c_[i]; }
  const Vec4& coords() const { return c_; }

  double sum() const { return c_[0] + c_[1] + c_[2] + c_[3]; }

  /// Distance to the simplex in the sense used for drift checks: the worst of
  /// the most negative coordinate and the coordinate-sum error.
  double drift() const {
    const double neg = std::max(0.0, -*std::min_element(c_.begin(), c_.end()));
    return std::max(neg, std::abs(sum() - 1.0));
  }

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  Vec4 c_;
};

inline double max_abs_diff(const Vec4& a, const Vec4& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double distance(const SimplexPoint& a, const SimplexPoint& b) {
  return max_abs_diff(a.coords(), b.coords());
}

struct ForceOfInfection {
  double value = 0.0;
};

inline ForceOfInfection force_of_infection(const SimplexPoint& s, const ModelParams& p) {
  return {p.k1 * s.u() + p.k2 * s.v()};
}

/// The operator evaluated on an arbitrary vector of R^4, with no admissibility
/// or simplex checks. Off the simplex this is the raw polynomial map whose
/// partial derivatives make up the Jacobian.
inline Vec4 apply_operator_raw(const Vec4& s, const ModelParams& p) {
  const double x = s[0], u = s[1], y = s[2], v = s[3];
  const double a = p.k1 * u + p.k2 * v;
  return {x + p.b - p.b * x - p.beta1 * a * x,
          u - p.b * u + p.beta1 * a * x - p.alpha * u,
          y - p.b * y + p.alpha * u - p.beta2 * a * y,
          v - p.b * v + p.beta2 * a * y};
}

inline SimplexPoint apply_V(const SimplexPoint& s, const ModelParams& p) {
  require_admissible(p);
  return SimplexPoint::unchecked(apply_operator_raw(s.coords(), p));
}

class Trajectory {
 public:
  explicit Trajectory(std::vector<SimplexPoint> points) : points_(std::move(points)) {}

  const std::vector<SimplexPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const SimplexPoint& operator[](std::size_t n) const { return points_[n]; }
  const SimplexPoint& back() const { return points_.back(); }

  double max_drift() const {
    double d = 0.0;
    for (const auto& s : points_) d = std::max(d, s.drift());
    return d;
  }

 private:
  std::vector<SimplexPoint> points_;
};

/// Returns the orbit s0, V(s0), ..., V^n(s0). No renormalization is applied;
/// see Trajectory::max_drift().
inline Trajectory iterate(const SimplexPoint& s0, const ModelParams& p, std::size_t n) {
  require_admissible(p);
  std::vector<SimplexPoint> points;
  points.reserve(n + 1);
  points.push_back(s0);
  Vec4 cur = s0.coords();
  for (std::size_t i = 0; i < n; ++i) {
    cur = apply_operator_raw(cur, p);
    points.push_back(SimplexPoint::unchecked(cur));
  }
  return Trajectory(std::move(points));
}

/// V^n(s0) without storing the orbit.
inline SimplexPoint iterate_final(const SimplexPoint& s0, const ModelParams& p, std::size_t n) {
  require_admissible(p);
  Vec4 cur = s0.coords();
  for (std::size_t i = 0; i < n; ++i) cur = apply_operator_raw(cur, p);
  return SimplexPoint::unchecked(cur);
}

inline double fixed_point_residual(const SimplexPoint& s, const ModelParams& p) {
  return max_abs_diff(apply_operator_raw(s.coords(), p), s.coords());
}

}  // namespace sisi
