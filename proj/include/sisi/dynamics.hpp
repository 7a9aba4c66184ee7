#pragma once

// Long-run behaviour of trajectories.
//
//  * detect_limit: iterate until the step size falls below tol_step or the
//    orbit comes within tol_fix of an isolated catalog fixed point.
//  * predicted_limit: closed-form limit for the parameter regimes where one is
//    known, including the two conjectured regimes (flagged as such).
//  * verify_regime: randomized agreement check between the two.
//  * conjecture_scan: deterministic grid scan of a conjectured regime.
//  * fg_curves: the two sides f, g of the force-of-infection equation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "sisi/error.hpp"
#include "sisi/fixpoints.hpp"
#include "sisi/model.hpp"

namespace sisi {

struct LimitOptions {
  std::size_t max_iter = 1'000'000;
  double tol_step = 1e-12;
  double tol_fix = 1e-10;
};

/// Named parameter regimes with a known (or conjectured) limit.
enum class Regime {
  // beta1 = beta2 = 0
  NoSusceptibilityStatic,
  NoSusceptibilityRecovery,
  NoSusceptibilityBirth,
  // beta1 = 0, beta2 > 0
  ImmuneFirstStatic,
  ImmuneFirstBirthNoRecovery,
  ImmuneFirstRecoveryK2Zero,
  ImmuneFirstRecovery,
  ImmuneFirstBirthRecovery,
  // b = alpha = 0
  ClosedNoInfectivity,
  ClosedSecondOnly,
  ClosedFirstOnly,
  ClosedBoth,
  // alpha = k2 = 0, b > 0
  SingleStrainBelowThreshold,
  SingleStrainNoInfected,
  SingleStrainEndemic,
  // beta2 = 0, beta1 > 0
  NoReinfectionFrozen,
  NoReinfectionSecondActive,
  NoReinfectionFirstActive,
  NoReinfectionBirthNoInfection,
  NoReinfectionBirthSubcritical,
  NoReinfectionConjectureSub,
  NoReinfectionConjectureSuper,
  // all six rates positive
  AllPositiveNoInfected,
  AllPositiveConjectureSub,
  AllPositiveConjectureSuper,
};

struct RegimeInfo {
  Regime regime;
  const char* id;
  const char* condition;
  bool conjectural;
};

inline const std::vector<RegimeInfo>& regime_table() {
  static const std::vector<RegimeInfo> table{
      {Regime::NoSusceptibilityStatic, "no-susceptibility/static", "beta1=beta2=0, b=alpha=0", false},
      {Regime::NoSusceptibilityRecovery, "no-susceptibility/recovery", "beta1=beta2=0, b=0, alpha>0", false},
      {Regime::NoSusceptibilityBirth, "no-susceptibility/birth", "beta1=beta2=0, b>0", false},
      {Regime::ImmuneFirstStatic, "immune-first/static", "beta1=0, beta2>0, b=alpha=0", false},
      {Regime::ImmuneFirstBirthNoRecovery, "immune-first/birth", "beta1=0, beta2>0, b>0, alpha=0", false},
      {Regime::ImmuneFirstRecoveryK2Zero, "immune-first/recovery-k2=0", "beta1=0, beta2>0, b=0, alpha>0, k2=0",
       false},
      {Regime::ImmuneFirstRecovery, "immune-first/recovery", "beta1=0, beta2>0, b=0, alpha>0, k2>0", false},
      {Regime::ImmuneFirstBirthRecovery, "immune-first/birth-recovery", "beta1=0, beta2>0, b>0, alpha>0", false},
      {Regime::ClosedNoInfectivity, "closed/no-infectivity", "b=alpha=0, k1=k2=0", false},
      {Regime::ClosedSecondOnly, "closed/second-only", "b=alpha=0, beta1=0, beta2>0, k1+k2>0", false},
      {Regime::ClosedFirstOnly, "closed/first-only", "b=alpha=0, beta1>0, beta2=0, k1+k2>0", false},
      {Regime::ClosedBoth, "closed/both", "b=alpha=0, beta1>0, beta2>0, k1*k2>0", false},
      {Regime::SingleStrainBelowThreshold, "single-strain/below-threshold", "alpha=k2=0, b>0, beta1*k1<=b", false},
      {Regime::SingleStrainNoInfected, "single-strain/no-infected", "alpha=k2=0, b>0, u0=0", false},
      {Regime::SingleStrainEndemic, "single-strain/endemic", "alpha=k2=0, b>0, beta1*k1>b, u0>0", false},
      {Regime::NoReinfectionFrozen, "no-reinfection/frozen", "beta2=0, beta1>0, b=0, alpha>0, k1*u0+k2*v0=0",
       false},
      {Regime::NoReinfectionSecondActive, "no-reinfection/second-active", "beta2=0, beta1>0, b=0, alpha>0, k2*v0>0",
       false},
      {Regime::NoReinfectionFirstActive, "no-reinfection/first-active",
       "beta2=0, beta1>0, b=0, alpha>0, k2*v0=0, k1*u0>0", false},
      {Regime::NoReinfectionBirthNoInfection, "no-reinfection/birth-no-infection",
       "beta2=0, beta1>0, b*alpha>0, k1*u0+k2*v0=0", false},
      {Regime::NoReinfectionBirthSubcritical, "no-reinfection/birth-subcritical",
       "beta2=0, beta1>0, b*alpha>0, k2*v0=0, beta1*k1<=b+alpha", false},
      {Regime::NoReinfectionConjectureSub, "no-reinfection/conjecture-subcritical",
       "beta2=0, beta1>0, b*alpha>0, k2*v0>0, beta1*k1<=b+alpha", true},
      {Regime::NoReinfectionConjectureSuper, "no-reinfection/conjecture-supercritical",
       "beta2=0, beta1>0, b*alpha>0, u0+v0>0, beta1*k1>b+alpha", true},
      {Regime::AllPositiveNoInfected, "all-positive/no-infected", "all rates > 0, u0=v0=0", false},
      {Regime::AllPositiveConjectureSub, "all-positive/conjecture-subcritical",
       "all rates > 0, beta1*k1<=b+alpha, b(b+alpha)>=alpha*beta2*k2", true},
      {Regime::AllPositiveConjectureSuper, "all-positive/conjecture-supercritical",
       "all rates > 0, u0+v0>0, beta1*k1>b+alpha", true},
  };
  return table;
}

inline const RegimeInfo& regime_info(Regime r) {
  for (const auto& info : regime_table())
    if (info.regime == r) return info;
  throw Error(ErrorKind::RegimeUnsatisfiable, "unknown regime");
}

inline std::optional<Regime> regime_from_id(std::string_view id) {
  for (const auto& info : regime_table())
    if (id == info.id) return info.regime;
  return std::nullopt;
}

struct PredictedLimit {
  Regime regime;
  std::string target;  // "lambda1", "initial point", "(x0,0,0,1-x0)", ...
  bool conjectural = false;
  bool depends_on_initial = false;  // some coordinates are left free
  std::array<std::optional<double>, 4> pinned;
  // Closed b=alpha=0 regime with both strains: the alternative reading in
  // which the limiting u equals u0 exactly.
  std::optional<double> literal_u;

  /// Largest deviation over the pinned coordinates.
  double deviation(const SimplexPoint& s) const {
    double d = 0.0;
    for (int i = 0; i < 4; ++i)
      if (pinned[i]) d = std::max(d, std::abs(s[i] - *pinned[i]));
    return d;
  }

  bool matches(const SimplexPoint& s, double tolerance = tol::kLimit) const { return deviation(s) <= tolerance; }
};

struct LimitReport {
  bool converged = false;
  SimplexPoint limit;  // last iterate, or the snapped catalog point
  std::size_t iterations = 0;
  double final_step = 0.0;
  std::optional<std::string> snapped_to;
  std::optional<PredictedLimit> predicted;
  std::optional<bool> match;
};

using IterateObserver = std::function<void(std::size_t, const Vec4&)>;

/// Iterates from s0. Converges when a step is <= tol_step, or when an iterate
/// lies within tol_fix of an isolated fixed point from the catalog (the limit
/// is then snapped to that point). `iterations` is the index of the iterate
/// at which either test fired. The observer, when given, sees every iterate
/// including s0.
inline LimitReport detect_limit(const SimplexPoint& s0, const ModelParams& p, const LimitOptions& opt = {},
                                const IterateObserver& observer = {}) {
  require_admissible(p);
  if (opt.max_iter < 1) throw Error(ErrorKind::DegenerateInput, "max_iter must be >= 1");
  const auto catalog = fixed_point_set(p);
  std::vector<std::pair<std::string, Vec4>> anchors;
  for (const auto* fp : catalog.isolated()) anchors.emplace_back(fp->label, fp->point().coords());

  LimitReport report;
  auto snap = [&](const Vec4& c) -> bool {
    for (const auto& [label, a] : anchors) {
      if (max_abs_diff(c, a) <= opt.tol_fix) {
        report.converged = true;
        report.limit = SimplexPoint::unchecked(a);
        report.snapped_to = label;
        return true;
      }
    }
    return false;
  };

  // A point within tol_fix of a fixed point moves by at most a few tol_fix,
  // so the catalog is only consulted once steps are small.
  constexpr double kSnapGate = 1e-6;
  Vec4 cur = s0.coords();
  if (observer) observer(0, cur);
  for (std::size_t n = 0;; ++n) {
    report.iterations = n;
    if ((n == 0 || report.final_step <= kSnapGate) && snap(cur)) return report;
    if (n == opt.max_iter) break;
    const Vec4 next = apply_operator_raw(cur, p);
    report.final_step = max_abs_diff(next, cur);
    cur = next;
    if (observer) observer(n + 1, cur);
    if (report.final_step <= opt.tol_step) {
      // iterate n already sat at the limit; a fixed s0 reports 0 iterations
      if (!snap(cur)) {
        report.converged = true;
        report.limit = SimplexPoint::unchecked(cur);
      }
      return report;
    }
  }
  report.converged = false;
  report.limit = SimplexPoint::unchecked(cur);
  return report;
}

namespace detail {

inline PredictedLimit exact_target(Regime r, std::string target, const Vec4& c) {
  PredictedLimit pl{r, std::move(target), regime_info(r).conjectural, false, {}, std::nullopt};
  for (int i = 0; i < 4; ++i) pl.pinned[i] = c[i];
  return pl;
}

inline PredictedLimit partial_target(Regime r, std::string target, std::array<std::optional<double>, 4> pins) {
  return {r, std::move(target), regime_info(r).conjectural, true, pins, std::nullopt};
}

}  // namespace detail

/// Closed-form limit of the orbit of s0, or nullopt when no known result
/// covers the parameters and initial point. Zero tests on parameters are
/// exact.
inline std::optional<PredictedLimit> predicted_limit(const SimplexPoint& s0, const ModelParams& p) {
  require_admissible(p);
  using detail::exact_target;
  using detail::partial_target;
  const double x0 = s0.x(), u0 = s0.u(), y0 = s0.y(), v0 = s0.v();
  const bool b0 = p.b == 0.0, a0 = p.alpha == 0.0;
  const bool s1 = p.beta1 > 0.0, s2 = p.beta2 > 0.0;
  const double force0 = p.k1 * u0 + p.k2 * v0;
  const double infect = p.beta1 * p.k1;
  const Vec4 l1{1, 0, 0, 0};
  const Vec4 init = s0.coords();

  if (!s1 && !s2) {
    if (b0 && a0) return exact_target(Regime::NoSusceptibilityStatic, "initial point", init);
    if (b0) return exact_target(Regime::NoSusceptibilityRecovery, "(x0,0,1-x0-v0,v0)", {x0, 0, 1 - x0 - v0, v0});
    return exact_target(Regime::NoSusceptibilityBirth, "lambda1", l1);
  }

  if (!s1 && s2) {
    if (b0 && a0) {
      if (force0 == 0.0) return exact_target(Regime::ImmuneFirstStatic, "initial point", init);
      return exact_target(Regime::ImmuneFirstStatic, "(x0,u0,0,1-x0-u0)", {x0, u0, 0, 1 - x0 - u0});
    }
    if (!b0 && a0) return exact_target(Regime::ImmuneFirstBirthNoRecovery, "lambda1", l1);
    if (b0 && p.k2 == 0.0) {
      return partial_target(Regime::ImmuneFirstRecoveryK2Zero, "(x0,0,ybar,1-x0-ybar)",
                            {x0, 0.0, std::nullopt, std::nullopt});
    }
    if (b0) {
      // The I1 class must become populated at some step; otherwise A stays 0.
      const bool v_activates = v0 > 0.0 || (p.k1 > 0.0 && u0 > 0.0 && (y0 > 0.0 || p.alpha < 1.0));
      if (!v_activates) return std::nullopt;
      return exact_target(Regime::ImmuneFirstRecovery, "(x0,0,0,1-x0)", {x0, 0, 0, 1 - x0});
    }
    return exact_target(Regime::ImmuneFirstBirthRecovery, "lambda1", l1);
  }

  // From here on beta1 > 0.
  if (b0 && a0) {
    if (p.k1 == 0.0 && p.k2 == 0.0) return exact_target(Regime::ClosedNoInfectivity, "initial point", init);
    if (!s2) {
      if (force0 == 0.0) return exact_target(Regime::ClosedFirstOnly, "initial point", init);
      return exact_target(Regime::ClosedFirstOnly, "(0,1-y0-v0,y0,v0)", {0, 1 - y0 - v0, y0, v0});
    }
    if (p.k1 * p.k2 > 0.0) {
      if (force0 == 0.0) return exact_target(Regime::ClosedBoth, "initial point", init);
      auto pl = partial_target(Regime::ClosedBoth, "(0,ubar,0,1-ubar)", {0.0, std::nullopt, 0.0, std::nullopt});
      pl.literal_u = u0;
      return pl;
    }
    return std::nullopt;
  }

  if (a0 && p.k2 == 0.0) {  // b > 0 here
    if (u0 == 0.0) return exact_target(Regime::SingleStrainNoInfected, "lambda1", l1);
    if (infect <= p.b) return exact_target(Regime::SingleStrainBelowThreshold, "lambda1", l1);
    return exact_target(Regime::SingleStrainEndemic, "lambda9", {p.b / infect, (infect - p.b) / infect, 0, 0});
  }

  if (!s2) {
    if (b0 && !a0) {
      if (force0 == 0.0) {
        return exact_target(Regime::NoReinfectionFrozen, "(x0,0,1-x0-v0,v0)", {x0, 0, 1 - x0 - v0, v0});
      }
      if (p.k2 * v0 > 0.0) {
        return exact_target(Regime::NoReinfectionSecondActive, "(0,0,1-v0,v0)", {0, 0, 1 - v0, v0});
      }
      return partial_target(Regime::NoReinfectionFirstActive, "(xbar,0,1-xbar-v0,v0)",
                            {std::nullopt, 0.0, std::nullopt, v0});
    }
    if (!b0 && !a0) {
      const double threshold = p.b + p.alpha;
      if (force0 == 0.0) return exact_target(Regime::NoReinfectionBirthNoInfection, "lambda1", l1);
      if (p.k2 * v0 == 0.0 && infect <= threshold) {
        return exact_target(Regime::NoReinfectionBirthSubcritical, "lambda1", l1);
      }
      if (infect <= threshold) return exact_target(Regime::NoReinfectionConjectureSub, "lambda1", l1);
      const double excess = infect - threshold;
      return exact_target(Regime::NoReinfectionConjectureSuper, "lambda10",
                          {threshold / infect, p.b * excess / (infect * threshold),
                           p.alpha * excess / (infect * threshold), 0});
    }
    return std::nullopt;
  }

  if (p.alpha * p.b * p.beta1 * p.beta2 * p.k1 * p.k2 > 0.0) {
    const double threshold = p.b + p.alpha;
    if (u0 == 0.0 && v0 == 0.0) return exact_target(Regime::AllPositiveNoInfected, "lambda1", l1);
    if (infect <= threshold && p.b * threshold >= p.alpha * p.beta2 * p.k2) {
      return exact_target(Regime::AllPositiveConjectureSub, "lambda1", l1);
    }
    if (infect > threshold) {
      return exact_target(Regime::AllPositiveConjectureSuper, "lambda11", lambda11(p).point().coords());
    }
  }
  return std::nullopt;
}

/// detect_limit plus the comparison against predicted_limit.
inline LimitReport detect_and_compare(const SimplexPoint& s0, const ModelParams& p, const LimitOptions& opt = {},
                                      const IterateObserver& observer = {}) {
  LimitReport r = detect_limit(s0, p, opt, observer);
  r.predicted = predicted_limit(s0, p);
  if (r.predicted && r.converged) r.match = r.predicted->matches(r.limit);
  return r;
}

// ---------------------------------------------------------------------------
// Randomized regime verification

struct TrialRecord {
  ModelParams params;
  SimplexPoint s0;
  LimitReport report;
  double deviation = 0.0;
};

struct SuiteReport {
  Regime regime;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t passes = 0;
  std::size_t nonconverged = 0;
  std::size_t missing_prediction = 0;
  double worst_deviation = 0.0;
  std::size_t max_iterations = 0;
  // Closed-both regime only: trials where the limiting u equals u0.
  std::size_t literal_reading_holds = 0;
  std::vector<TrialRecord> failures;

  bool all_passed() const { return passes == trials; }
};

namespace detail {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Positive rates are sampled away from zero and strict inequalities with a
// margin; arbitrarily small rates make convergence arbitrarily slow.
inline constexpr double kRateMin = 0.05;
inline constexpr double kMargin = 0.01;
inline constexpr double kCoordMin = 0.01;

inline double rate(Rng& rng) { return uniform(rng, kRateMin, 1.0); }
inline double coupling(Rng& rng) { return uniform(rng, 0.1, 2.0); }

/// Uniform point of the simplex (Dirichlet(1,1,1,1)) restricted to the
/// support mask, every free coordinate >= kCoordMin.
inline SimplexPoint random_point(Rng& rng, const Support& support = {true, true, true, true}) {
  std::exponential_distribution<double> e(1.0);
  for (;;) {
    Vec4 c{0, 0, 0, 0};
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      if (support[i]) {
        c[i] = e(rng);
        sum += c[i];
      }
    }
    bool ok = true;
    for (int i = 0; i < 4; ++i) {
      if (!support[i]) continue;
      c[i] /= sum;
      ok = ok && c[i] >= kCoordMin;
    }
    if (!ok) continue;
    double total = c[0] + c[1] + c[2];
    c[3] = support[3] ? 1.0 - total : 0.0;
    if (!support[3]) {
      // put the rounding error on the last free coordinate
      for (int i = 2; i >= 0; --i) {
        if (support[i]) {
          c[i] = 1.0 - (total - c[i]);
          break;
        }
      }
    }
    return SimplexPoint(c);
  }
}

/// One attempt at drawing regime-conforming parameters and an initial point.
/// Returns nullopt when the draw is inadmissible (the caller retries).
inline std::optional<std::pair<ModelParams, SimplexPoint>> sample_regime(Regime r, Rng& rng) {
  ModelParams p;
  Support sup{true, true, true, true};
  auto coin = [&] { return std::uniform_int_distribution<int>(0, 1)(rng) == 1; };
  auto frozen_force = [&] {
    // k1*u0 + k2*v0 = 0 through one of the four ways it can vanish
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0: p.k1 = p.k2 = 0.0; break;
      case 1: p.k1 = 0.0; p.k2 = coupling(rng); sup[3] = false; break;
      case 2: p.k1 = coupling(rng); p.k2 = 0.0; sup[1] = false; break;
      default: p.k1 = coupling(rng); p.k2 = coupling(rng); sup[1] = sup[3] = false; break;
    }
  };
  switch (r) {
    case Regime::NoSusceptibilityStatic:
      p.k1 = coupling(rng); p.k2 = coupling(rng);
      break;
    case Regime::NoSusceptibilityRecovery:
      p.alpha = rate(rng); p.k1 = coupling(rng); p.k2 = coupling(rng);
      break;
    case Regime::NoSusceptibilityBirth:
      p.b = rate(rng); p.alpha = uniform(rng, 0.0, 1.0); p.k1 = coupling(rng); p.k2 = coupling(rng);
      break;
    case Regime::ImmuneFirstStatic:
    case Regime::ClosedSecondOnly:
      p.beta2 = coupling(rng); p.k1 = coupling(rng); p.k2 = coupling(rng);
      if (r == Regime::ClosedSecondOnly && coin()) (coin() ? p.k1 : p.k2) = 0.0;
      break;
    case Regime::ImmuneFirstBirthNoRecovery:
      p.b = rate(rng); p.beta2 = coupling(rng); p.k1 = coupling(rng); p.k2 = coupling(rng);
      break;
    case Regime::ImmuneFirstRecoveryK2Zero:
      p.alpha = rate(rng); p.beta2 = coupling(rng); p.k1 = coupling(rng);
      break;
    case Regime::ImmuneFirstRecovery:
      p.alpha = rate(rng); p.beta2 = coupling(rng); p.k1 = coin() ? coupling(rng) : 0.0; p.k2 = coupling(rng);
      break;
    case Regime::ImmuneFirstBirthRecovery:
      p.b = rate(rng); p.alpha = rate(rng); p.beta2 = coupling(rng); p.k1 = coupling(rng); p.k2 = coupling(rng);
      break;
    case Regime::ClosedNoInfectivity:
      p.beta1 = uniform(rng, 0.0, 2.0); p.beta2 = uniform(rng, 0.0, 2.0);
      break;
    case Regime::ClosedFirstOnly:
      p.beta1 = coupling(rng); p.k1 = coupling(rng); p.k2 = coupling(rng);
      if (coin()) (coin() ? p.k1 : p.k2) = 0.0;
      break;
    case Regime::ClosedBoth:
      p.beta1 = coupling(rng); p.beta2 = coupling(rng); p.k1 = coupling(rng); p.k2 = coupling(rng);
      break;
    case Regime::SingleStrainBelowThreshold:
      p.b = rate(rng); p.beta1 = coupling(rng); p.beta2 = uniform(rng, 0.0, 2.0);
      p.k1 = uniform(rng, 0.0, std::max(0.0, p.b - kMargin) / p.beta1);
      break;
    case Regime::SingleStrainNoInfected:
      p.b = rate(rng); p.beta1 = coupling(rng); p.beta2 = uniform(rng, 0.0, 2.0); p.k1 = coupling(rng);
      sup[1] = false;
      break;
    case Regime::SingleStrainEndemic:
      p.b = rate(rng); p.beta1 = coupling(rng); p.beta2 = uniform(rng, 0.0, 2.0); p.k1 = coupling(rng);
      if (p.beta1 * p.k1 < p.b + kMargin) return std::nullopt;
      break;
    case Regime::NoReinfectionFrozen:
      p.alpha = rate(rng); p.beta1 = coupling(rng); frozen_force();
      break;
    case Regime::NoReinfectionSecondActive:
      p.alpha = rate(rng); p.beta1 = coupling(rng); p.k1 = uniform(rng, 0.0, 2.0); p.k2 = coupling(rng);
      break;
    case Regime::NoReinfectionFirstActive:
      p.alpha = rate(rng); p.beta1 = coupling(rng); p.k1 = coupling(rng);
      if (coin()) p.k2 = 0.0; else { p.k2 = coupling(rng); sup[3] = false; }
      break;
    case Regime::NoReinfectionBirthNoInfection:
      p.b = rate(rng); p.alpha = rate(rng); p.beta1 = coupling(rng); frozen_force();
      break;
    case Regime::NoReinfectionBirthSubcritical:
      p.b = rate(rng); p.alpha = rate(rng); p.beta1 = coupling(rng);
      p.k1 = uniform(rng, 0.0, std::max(0.0, p.b + p.alpha - kMargin) / p.beta1);
      if (coin()) p.k2 = 0.0; else { p.k2 = coupling(rng); sup[3] = false; }
      break;
    case Regime::NoReinfectionConjectureSub:
      p.b = rate(rng); p.alpha = rate(rng); p.beta1 = coupling(rng); p.k2 = coupling(rng);
      p.k1 = uniform(rng, 0.0, std::max(0.0, p.b + p.alpha - kMargin) / p.beta1);
      break;
    case Regime::NoReinfectionConjectureSuper:
      p.b = rate(rng); p.alpha = rate(rng); p.beta1 = coupling(rng); p.k1 = coupling(rng);
      p.k2 = uniform(rng, 0.0, 2.0);
      if (p.beta1 * p.k1 < p.b + p.alpha + kMargin) return std::nullopt;
      break;
    case Regime::AllPositiveNoInfected:
      p.b = rate(rng); p.alpha = rate(rng); p.beta1 = coupling(rng); p.beta2 = coupling(rng);
      p.k1 = coupling(rng); p.k2 = coupling(rng);
      sup[1] = sup[3] = false;
      break;
    case Regime::AllPositiveConjectureSub:
      p.b = rate(rng); p.alpha = rate(rng); p.beta1 = coupling(rng); p.beta2 = coupling(rng);
      p.k2 = coupling(rng);
      p.k1 = uniform(rng, 0.01, std::max(0.01, p.b + p.alpha - kMargin) / p.beta1);
      if (p.beta1 * p.k1 > p.b + p.alpha - kMargin) return std::nullopt;
      if (p.b * (p.b + p.alpha) < p.alpha * p.beta2 * p.k2) return std::nullopt;
      break;
    case Regime::AllPositiveConjectureSuper:
      p.b = rate(rng); p.alpha = rate(rng); p.beta1 = coupling(rng); p.beta2 = coupling(rng);
      p.k1 = coupling(rng); p.k2 = coupling(rng);
      if (p.beta1 * p.k1 < p.b + p.alpha + kMargin) return std::nullopt;
      break;
  }
  if (!p.admissible()) return std::nullopt;
  return std::make_pair(p, random_point(rng, sup));
}

}  // namespace detail

inline constexpr std::size_t kMaxSamplingAttempts = 1'000'000;

/// Draws `trials` regime-conforming (params, s0) pairs and checks that the
/// detected limit agrees with the prediction on every pinned coordinate.
inline SuiteReport verify_regime(Regime regime, std::size_t trials, std::uint64_t seed = 2024,
                                 const LimitOptions& opt = {}, double tolerance = tol::kLimit,
                                 std::size_t max_attempts = kMaxSamplingAttempts) {
  SuiteReport rep;
  rep.regime = regime;
  rep.seed = seed;
  rep.trials = trials;
  detail::Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    std::optional<std::pair<ModelParams, SimplexPoint>> draw;
    for (std::size_t attempt = 0; attempt < max_attempts && !draw; ++attempt) {
      draw = detail::sample_regime(regime, rng);
    }
    if (!draw) {
      throw Error(ErrorKind::RegimeUnsatisfiable,
                  std::string(regime_info(regime).id) + ": no admissible parameters found");
    }
    const auto& [p, s0] = *draw;
    TrialRecord rec{p, s0, detect_and_compare(s0, p, opt), 0.0};
    rep.max_iterations = std::max(rep.max_iterations, rec.report.iterations);
    bool ok = rec.report.converged && rec.report.predicted.has_value();
    if (!rec.report.converged) ++rep.nonconverged;
    if (!rec.report.predicted) ++rep.missing_prediction;
    if (ok) {
      rec.deviation = rec.report.predicted->deviation(rec.report.limit);
      rep.worst_deviation = std::max(rep.worst_deviation, rec.deviation);
      ok = rec.deviation <= tolerance;
      if (rec.report.predicted->literal_u &&
          std::abs(rec.report.limit.u() - *rec.report.predicted->literal_u) <= tolerance) {
        ++rep.literal_reading_holds;
      }
    }
    if (ok) {
      ++rep.passes;
    } else {
      rep.failures.push_back(std::move(rec));
    }
  }
  return rep;
}

inline std::vector<Regime> proven_regimes() {
  std::vector<Regime> out;
  for (const auto& info : regime_table())
    if (!info.conjectural) out.push_back(info.regime);
  return out;
}

// ---------------------------------------------------------------------------
// Conjecture scans

enum class Conjecture { NoReinfection = 1, AllPositive = 2 };

enum class Verdict { Match, Counterexample, Inconclusive, NoPrediction, OutOfHypothesis, Inadmissible };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Match: return "match";
    case Verdict::Counterexample: return "counterexample";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::NoPrediction: return "no-prediction";
    case Verdict::OutOfHypothesis: return "out-of-hypothesis";
    case Verdict::Inadmissible: return "inadmissible";
  }
  return "?";
}

/// Six parameter axes in the order b, alpha, beta1, beta2, k1, k2.
struct GridSpec {
  std::array<std::vector<double>, 6> axes;
  int initial_points = 5;
  std::uint64_t seed = 1;
  LimitOptions limit{};
  unsigned threads = 1;

  std::size_t cell_count() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.size();
    return n;
  }
};

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  if (n == 1) return {lo};
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

/// Default grid: `resolution` values per axis. The beta2 axis is {0} for the
/// no-reinfection conjecture, whose hypothesis fixes beta2 = 0.
inline GridSpec default_grid(Conjecture which, int resolution = 5) {
  GridSpec g;
  g.axes[0] = linspace(0.05, 0.6, resolution);
  g.axes[1] = linspace(0.05, 0.35, resolution);
  g.axes[2] = linspace(0.2, 1.4, resolution);
  g.axes[3] = which == Conjecture::NoReinfection ? std::vector<double>{0.0} : linspace(0.05, 0.65, resolution);
  g.axes[4] = linspace(0.2, 1.4, resolution);
  g.axes[5] = linspace(0.1, 1.3, resolution);
  return g;
}

struct ScanRun {
  std::size_t cell = 0;
  int point = 0;
  ModelParams params;
  std::optional<SimplexPoint> s0;
  std::optional<LimitReport> report;
  Verdict verdict = Verdict::Inadmissible;
};

struct ScanReport {
  Conjecture which;
  std::uint64_t seed = 0;
  std::size_t cells = 0;
  std::vector<ScanRun> runs;  // ordered by (cell, point)
  std::array<std::size_t, 6> counts{};

  std::size_t count(Verdict v) const { return counts[static_cast<int>(v)]; }
  std::vector<const ScanRun*> counterexamples() const {
    std::vector<const ScanRun*> out;
    for (const auto& r : runs)
      if (r.verdict == Verdict::Counterexample) out.push_back(&r);
    return out;
  }
};

inline ModelParams grid_params(const GridSpec& g, std::size_t cell) {
  std::array<double, 6> v{};
  for (int a = 5; a >= 0; --a) {
    const auto& axis = g.axes[a];
    v[a] = axis[cell % axis.size()];
    cell /= axis.size();
  }
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

inline bool in_hypothesis(Conjecture which, const ModelParams& p) {
  if (which == Conjecture::NoReinfection) return p.beta2 == 0.0 && p.beta1 > 0.0 && p.b * p.alpha > 0.0;
  return p.alpha * p.b * p.beta1 * p.beta2 * p.k1 * p.k2 > 0.0;
}

/// Initial point for (cell, point), drawn from an RNG seeded by the scan seed
/// and the run's coordinates only, so results do not depend on scheduling.
inline SimplexPoint scan_initial_point(std::uint64_t seed, std::size_t cell, int point) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(cell), static_cast<std::uint32_t>(point)};
  detail::Rng rng(seq);
  return detail::random_point(rng);
}

inline std::vector<ScanRun> scan_cell(Conjecture which, const GridSpec& g, std::size_t cell) {
  const ModelParams p = grid_params(g, cell);
  std::vector<ScanRun> out;
  if (!p.admissible() || !in_hypothesis(which, p)) {
    out.push_back({cell, -1, p, std::nullopt, std::nullopt,
                   p.admissible() ? Verdict::OutOfHypothesis : Verdict::Inadmissible});
    return out;
  }
  for (int j = 0; j < g.initial_points; ++j) {
    const SimplexPoint s0 = scan_initial_point(g.seed, cell, j);
    ScanRun run{cell, j, p, s0, detect_and_compare(s0, p, g.limit), Verdict::NoPrediction};
    const auto& rep = *run.report;
    if (!rep.predicted) {
      run.verdict = Verdict::NoPrediction;
    } else if (!rep.converged) {
      run.verdict = Verdict::Inconclusive;
    } else {
      run.verdict = *rep.match ? Verdict::Match : Verdict::Counterexample;
    }
    out.push_back(std::move(run));
  }
  return out;
}

inline ScanReport conjecture_scan(Conjecture which, const GridSpec& g) {
  ScanReport rep;
  rep.which = which;
  rep.seed = g.seed;
  rep.cells = g.cell_count();
  std::vector<std::vector<ScanRun>> per_cell(rep.cells);
  const unsigned workers = std::max(1u, g.threads);
  auto work = [&](unsigned w) {
    for (std::size_t c = w; c < rep.cells; c += workers) per_cell[c] = scan_cell(which, g, c);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& runs : per_cell) {
    for (auto& r : runs) {
      ++rep.counts[static_cast<int>(r.verdict)];
      rep.runs.push_back(std::move(r));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// f/g curves of the force-of-infection equation

struct FGCurves {
  std::vector<double> xs, f, g;
  double g_at_zero = 0.0;     // b beta1 k1 / (b+alpha)
  double asymptote = 0.0;     // beta1 (b k1 + alpha k2) / (b+alpha)
  double slope_f = 0.0;       // beta1
  double slope_g_zero = 0.0;  // alpha beta1 beta2 k2 / (b (b+alpha))
  int sign_changes = 0;       // of f - g on the sampled x > 0
  std::vector<double> crossings;  // interpolated abscissae of the sign changes
};

inline double fg_f(const ModelParams& p, double x) { return p.b + p.beta1 * x; }

inline double fg_g(const ModelParams& p, double x) {
  const double s = p.b + p.alpha;
  return p.b * p.beta1 * p.k1 / s + p.alpha * p.beta1 * p.beta2 * p.k2 * x / ((p.b + p.beta2 * x) * s);
}

/// Samples f and g on `points` equally spaced abscissae of [0, x_max]. The
/// default x_max = max(k1, k2) bounds every force of infection attainable on
/// the simplex.
inline FGCurves fg_curves(const ModelParams& p, int points, std::optional<double> x_max = std::nullopt) {
  require_non_negative(p);
  if (!(p.b > 0.0)) throw Error(ErrorKind::DegenerateRegime, "g is undefined at x = 0 when b = 0");
  const double hi = x_max.value_or(std::max(p.k1, p.k2));
  if (!(hi > 0.0)) throw Error(ErrorKind::DegenerateInput, "sampling interval is empty");
  const int n = std::max(points, 2);
  FGCurves c;
  const double s = p.b + p.alpha;
  c.g_at_zero = p.b * p.beta1 * p.k1 / s;
  c.asymptote = p.beta1 * (p.b * p.k1 + p.alpha * p.k2) / s;
  c.slope_f = p.beta1;
  c.slope_g_zero = p.alpha * p.beta1 * p.beta2 * p.k2 / (p.b * s);
  for (int i = 0; i < n; ++i) {
    const double x = hi * i / (n - 1);
    c.xs.push_back(x);
    c.f.push_back(fg_f(p, x));
    c.g.push_back(fg_g(p, x));
  }
  // Sign changes of f - g over x > 0; the value at x = 0 seeds the sign so a
  // root exactly at 0 is not counted.
  auto sign = [](double d) { return d > 0.0 ? 1 : (d < 0.0 ? -1 : 0); };
  int prev = sign(c.f[0] - c.g[0]);
  double prev_x = c.xs[0], prev_d = c.f[0] - c.g[0];
  for (int i = 1; i < n; ++i) {
    const double d = c.f[i] - c.g[i];
    const int sg = sign(d);
    if (sg != 0 && prev != 0 && sg != prev) {
      ++c.sign_changes;
      c.crossings.push_back(prev_x + (c.xs[i] - prev_x) * prev_d / (prev_d - d));
    }
    if (sg != 0) {
      prev = sg;
      prev_x = c.xs[i];
      prev_d = d;
    }
  }
  return c;
}

}  // namespace sisi
