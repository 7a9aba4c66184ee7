#pragma once

// Fixed points of the SISI operator.
//
// The catalog is assembled from three sources and every candidate is kept only
// if it passes the residual check ||V(p) - p||_inf <= 1e-10:
//   * the tabulated case list (vertices lambda1..lambda4, faces Lambda5..Lambda8,
//     the whole simplex, and the force-of-infection points lambda9..lambda11);
//   * a scan of all 15 coordinate faces of the simplex, which is exact because
//     the residual restricted to a face is a quadratic polynomial;
//   * every positive root A of the force-of-infection equation, mapped back to
//     a point of the simplex.
// For b > 0 every fixed point other than (1,0,0,0) is determined by its force
// of infection A; for b = 0 the fixed set is a union of faces.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sisi/error.hpp"
#include "sisi/format.hpp"
#include "sisi/model.hpp"
#include "sisi/stability.hpp"

namespace sisi {

/// Real roots of c2 A^2 + c1 A + c0 = 0 in ascending order, computed with the
/// cancellation-free formula. Degrades to the linear case when c2 == 0.
inline std::vector<double> solve_quadratic(double c2, double c1, double c0) {
  std::vector<double> roots;
  if (c2 == 0.0) {
    if (c1 != 0.0) roots.push_back(-c0 / c1);
    return roots;
  }
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < 0.0) {
    // Tolerate a tiny negative discriminant from round-off near a double root.
    if (disc > -1e-14 * (c1 * c1 + std::abs(4.0 * c2 * c0))) {
      roots.push_back(-c1 / (2.0 * c2));
    }
    return roots;
  }
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (c1 + std::copysign(sq, c1));
  if (q == 0.0) {
    roots.push_back(0.0);
    roots.push_back(0.0);
    return roots;
  }
  roots.push_back(q / c2);
  roots.push_back(c0 / q);
  std::sort(roots.begin(), roots.end());
  return roots;
}

struct QuadraticCoefficients {
  double c2 = 0.0, c1 = 0.0, c0 = 0.0;
};

/// Force-of-infection equation with denominators cleared:
///   c2 = (b+alpha) beta1 beta2
///   c1 = (b+alpha) b (beta1+beta2) - beta1 beta2 (b k1 + alpha k2)
///   c0 = b^2 (b + alpha - beta1 k1)
inline QuadraticCoefficients force_equation_coefficients(const ModelParams& p) {
  const double s = p.b + p.alpha;
  return {s * p.beta1 * p.beta2,
          s * p.b * (p.beta1 + p.beta2) - p.beta1 * p.beta2 * (p.b * p.k1 + p.alpha * p.k2),
          p.b * p.b * (s - p.beta1 * p.k1)};
}

/// Right-hand side of the uncleared equation minus 1; zero at a valid force
/// of infection A. Requires b > 0 so both denominators stay positive.
inline double force_equation_residual(const ModelParams& p, double a) {
  const double s = p.b + p.alpha;
  const double d1 = p.b + p.beta1 * a;
  const double d2 = p.b + p.beta2 * a;
  return p.b * p.beta1 * p.k1 / (d1 * s) + p.alpha * p.beta1 * p.beta2 * p.k2 * a / (d1 * d2 * s) - 1.0;
}

/// Bisection on the uncleared equation over [lo, hi]; the residual must
/// change sign on the bracket.
inline std::optional<double> bisect_force_equation(const ModelParams& p, double lo, double hi) {
  double flo = force_equation_residual(p, lo);
  const double fhi = force_equation_residual(p, hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) return std::nullopt;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = force_equation_residual(p, mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct InteriorQuadratic {
  double c2 = 0.0, c1 = 0.0, c0 = 0.0;
  std::vector<double> roots;
  std::optional<double> positive_root;  // largest root > 0
};

inline InteriorQuadratic interior_quadratic(const ModelParams& p) {
  require_non_negative(p);
  const auto c = force_equation_coefficients(p);
  if (!(c.c2 > 0.0)) {
    throw Error(ErrorKind::DegenerateRegime, "leading coefficient (b+alpha)*beta1*beta2 is zero");
  }
  InteriorQuadratic q{c.c2, c.c1, c.c0, solve_quadratic(c.c2, c.c1, c.c0), std::nullopt};
  for (double r : q.roots) {
    if (r > 0.0) q.positive_root = r;
  }
  return q;
}

/// The fixed point carrying force of infection A (b > 0):
///   x = b/(b+beta1 A),  u = beta1 A x/(b+alpha),
///   y = alpha u/(b+beta2 A),  v = beta2 A y/b.
inline Vec4 point_from_force(const ModelParams& p, double a) {
  const double x = p.b / (p.b + p.beta1 * a);
  const double u = p.beta1 * a * x / (p.b + p.alpha);
  const double y = p.alpha * u / (p.b + p.beta2 * a);
  const double v = p.beta2 * a * y / p.b;
  return {x, u, y, v};
}

using Support = std::array<bool, 4>;  // coordinates allowed to be non-zero

enum class FixedPointKind { Point, Family };

struct FixedPoint {
  std::string label;
  FixedPointKind kind = FixedPointKind::Point;
  std::vector<SimplexPoint> representatives;  // one for points, >= 5 samples for families
  Support support{true, true, true, true};    // families: free coordinates
  std::string description;                    // e.g. "u=v=0"
  double residual = 0.0;                      // worst residual over representatives
  std::optional<double> force;                // A for force-of-infection points
  std::optional<StabilityReport> stability;   // isolated points only
  std::vector<std::string> notes;

  const SimplexPoint& point() const { return representatives.front(); }

  bool contains(const SimplexPoint& s, double tolerance) const {
    if (kind == FixedPointKind::Point) return distance(s, point()) <= tolerance;
    double off = 0.0;
    for (int i = 0; i < 4; ++i)
      if (!support[i]) off += std::abs(s[i]);
    return off <= tolerance;
  }
};

namespace detail {

inline const char* coordinate_name(int i) {
  static constexpr const char* names[] = {"x", "u", "y", "v"};
  return names[i];
}

inline Vec4 vertex(int i) {
  Vec4 e{0, 0, 0, 0};
  e[i] = 1.0;
  return e;
}

inline int support_size(const Support& s) { return static_cast<int>(std::count(s.begin(), s.end(), true)); }

inline bool subset_of(const Support& a, const Support& b) {
  for (int i = 0; i < 4; ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

inline std::string zero_description(const Support& s) {
  std::string d;
  for (int i = 0; i < 4; ++i) {
    if (s[i]) continue;
    if (!d.empty()) d += "=";
    d += coordinate_name(i);
  }
  return d.empty() ? "whole simplex" : d + "=0";
}

/// Labels used in the tabulated case list; other faces get "face(...)".
inline std::string face_label(const Support& s) {
  static const std::array<std::pair<Support, const char*>, 9> named{{
      {{true, false, false, false}, "lambda1"},
      {{false, false, false, true}, "lambda2"},
      {{false, false, true, false}, "lambda3"},
      {{false, true, false, false}, "lambda4"},
      {{true, false, true, false}, "Lambda5"},
      {{true, false, true, true}, "Lambda6"},
      {{false, true, true, true}, "Lambda7"},
      {{false, false, true, true}, "Lambda8"},
      {{true, true, true, true}, "S3"},
  }};
  for (const auto& [sup, name] : named)
    if (sup == s) return name;
  return "face(" + zero_description(s) + ")";
}

/// Vertices and edge midpoints of the face (the degree-2 lattice, on which a
/// quadratic vanishes identically iff it vanishes everywhere on the face),
/// plus the centroid and extra edge points so families have >= 5 samples.
inline std::vector<Vec4> face_samples(const Support& s) {
  std::vector<int> idx;
  for (int i = 0; i < 4; ++i)
    if (s[i]) idx.push_back(i);
  std::vector<Vec4> pts;
  for (int i : idx) pts.push_back(vertex(i));
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      Vec4 m{0, 0, 0, 0};
      m[idx[a]] = 0.5;
      m[idx[b]] = 0.5;
      pts.push_back(m);
    }
  if (idx.size() >= 2) {
    Vec4 c{0, 0, 0, 0};
    for (int i : idx) c[i] = 1.0 / static_cast<double>(idx.size());
    if (idx.size() > 2) pts.push_back(c);
    for (double t : {0.25, 0.75, 0.1, 0.9}) {
      if (pts.size() >= 5) break;
      Vec4 e{0, 0, 0, 0};
      e[idx[0]] = t;
      e[idx[1]] = 1.0 - t;
      pts.push_back(e);
    }
  }
  return pts;
}

inline std::vector<Support> all_supports() {
  std::vector<Support> out;
  for (int mask = 1; mask < 16; ++mask) {
    out.push_back({(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0, (mask & 8) != 0});
  }
  return out;
}

inline Support support_of(const Vec4& c) {
  return {c[0] != 0.0, c[1] != 0.0, c[2] != 0.0, c[3] != 0.0};
}

inline std::string force_point_label(const ModelParams& p) {
  if (p.alpha == 0.0) return "lambda9";
  if (p.beta2 == 0.0) return "lambda10";
  return "lambda11";
}

inline FixedPoint make_point(std::string label, const Vec4& c, const ModelParams& p) {
  FixedPoint fp;
  fp.label = std::move(label);
  fp.kind = FixedPointKind::Point;
  fp.representatives.push_back(SimplexPoint::unchecked(c));
  fp.support = support_of(c);
  fp.residual = fixed_point_residual(fp.point(), p);
  return fp;
}

inline FixedPoint make_family(const Support& s, const ModelParams& p) {
  FixedPoint fp;
  fp.label = face_label(s);
  fp.kind = FixedPointKind::Family;
  fp.support = s;
  fp.description = zero_description(s);
  for (const auto& c : face_samples(s)) {
    fp.representatives.push_back(SimplexPoint::unchecked(c));
    fp.residual = std::max(fp.residual, fixed_point_residual(fp.representatives.back(), p));
  }
  return fp;
}

inline bool on_simplex(const Vec4& c) {
  double sum = 0.0;
  for (double ci : c) {
    if (!(ci >= -tol::kClamp)) return false;
    sum += ci;
  }
  return std::abs(sum - 1.0) <= 1e-10;
}

}  // namespace detail

/// Interior-type fixed point built from the largest positive root of the
/// force-of-infection equation. The x-coordinate b/(b+beta1 A) is cross-checked
/// against the alternative expression b/(b+alpha); the one that is not fixed
/// is reported in notes.
inline FixedPoint lambda11(const ModelParams& p) {
  require_admissible(p);
  if (!(p.b > 0.0)) throw Error(ErrorKind::NoInteriorPoint, "b = 0 leaves no interior fixed point");
  InteriorQuadratic q;
  try {
    q = interior_quadratic(p);
  } catch (const Error& e) {
    throw Error(ErrorKind::NoInteriorPoint, e.what());
  }
  if (!q.positive_root) throw Error(ErrorKind::NoInteriorPoint, "force-of-infection equation has no positive root");
  const double a = *q.positive_root;
  FixedPoint fp = detail::make_point("lambda11", point_from_force(p, a), p);
  fp.force = a;
  if (fp.residual > tol::kFixedPoint || !detail::on_simplex(fp.point().coords())) {
    throw Error(ErrorKind::NoInteriorPoint, "candidate fails the residual check, residual " + format_double(fp.residual));
  }

  Vec4 alt = point_from_force(p, a);
  alt[0] = p.b / (p.b + p.alpha);
  const double alt_residual = max_abs_diff(apply_operator_raw(alt, p), alt);
  if (alt_residual > tol::kFixedPoint) {
    fp.notes.push_back("x=b/(b+alpha) variant is not fixed (residual " + format_double(alt_residual) +
                       "); using x=b/(b+beta1*A)");
  } else {
    fp.notes.push_back("x=b/(b+alpha) variant also fixed here (b+alpha == b+beta1*A)");
  }
  return fp;
}

struct RejectedCandidate {
  std::string label;
  std::string reason;
  double residual = 0.0;
};

struct FixedPointCatalog {
  std::vector<FixedPoint> entries;
  std::vector<RejectedCandidate> rejected;  // tabulated candidates that are not fixed

  const FixedPoint* find(const std::string& label) const {
    for (const auto& e : entries)
      if (e.label == label) return &e;
    return nullptr;
  }

  bool covers(const SimplexPoint& s, double tolerance) const {
    for (const auto& e : entries)
      if (e.contains(s, tolerance)) return true;
    return false;
  }

  std::vector<const FixedPoint*> isolated() const {
    std::vector<const FixedPoint*> out;
    for (const auto& e : entries)
      if (e.kind == FixedPointKind::Point) out.push_back(&e);
    return out;
  }
};

namespace detail {

struct Candidate {
  std::string label;
  std::optional<Vec4> point;      // isolated candidate
  std::optional<Support> family;  // face candidate
};

/// Candidates named by the tabulated case list. The predicates overlap and
/// some branches list points that are not fixed; the caller filters by
/// residual.
inline std::vector<Candidate> tabulated_candidates(const ModelParams& p) {
  const bool b0 = p.b == 0.0, a0 = p.alpha == 0.0, be1 = p.beta1 == 0.0, be2 = p.beta2 == 0.0;
  const double infect = p.beta1 * p.k1;
  std::vector<Candidate> c;
  auto vertex_candidate = [&](const char* label, int i) { c.push_back({label, vertex(i), std::nullopt}); };
  auto face_candidate = [&](const Support& s) { c.push_back({face_label(s), std::nullopt, s}); };

  vertex_candidate("lambda1", 0);
  if (b0) {
    vertex_candidate("lambda2", 3);
    vertex_candidate("lambda3", 2);
  }
  if (b0 && a0) {
    vertex_candidate("lambda2", 3);
    vertex_candidate("lambda4", 1);
    face_candidate({true, false, true, false});
  }
  if (b0 && be1 && be2) face_candidate({true, false, true, true});
  if (b0 && a0 && be2 && !be1) face_candidate({false, true, true, true});
  if (b0 && be2 && !be1 && !a0 && p.k1 * p.k2 > 0.0) {
    vertex_candidate("lambda4", 1);
    face_candidate({false, false, true, true});
  }
  if ((b0 && a0 && p.k1 == 0.0 && p.k2 == 0.0) || (b0 && a0 && be1 && be2)) face_candidate({true, true, true, true});
  if (p.b > 0.0 && a0 && infect > p.b) {
    c.push_back({"lambda9", Vec4{p.b / infect, (infect - p.b) / infect, 0.0, 0.0}, std::nullopt});
  }
  if (p.b > 0.0 && !a0 && be2 && infect > p.b + p.alpha) {
    const double s = p.b + p.alpha;
    const double excess = infect - s;
    c.push_back({"lambda10", Vec4{s / infect, p.b * excess / (infect * s), p.alpha * excess / (infect * s), 0.0},
                 std::nullopt});
  }
  if (p.alpha * p.b * p.beta1 * p.beta2 * p.k1 * p.k2 > 0.0) {
    const auto q = interior_quadratic(p);
    if (q.positive_root) c.push_back({"lambda11", point_from_force(p, *q.positive_root), std::nullopt});
  }
  return c;
}

}  // namespace detail

inline FixedPointCatalog fixed_point_set(const ModelParams& p) {
  require_admissible(p);
  FixedPointCatalog cat;

  // Coordinate faces: keep fixed vertices as points and maximal fixed faces
  // of dimension >= 1 as families.
  std::vector<Support> fixed_faces;
  for (const auto& s : detail::all_supports()) {
    if (detail::make_family(s, p).residual <= tol::kFixedPoint) fixed_faces.push_back(s);
  }
  for (int i : {0, 3, 2, 1}) {  // lambda1, lambda2, lambda3, lambda4
    Support s{false, false, false, false};
    s[i] = true;
    if (std::find(fixed_faces.begin(), fixed_faces.end(), s) != fixed_faces.end()) {
      cat.entries.push_back(detail::make_point(detail::face_label(s), detail::vertex(i), p));
    }
  }
  for (const auto& s : fixed_faces) {
    if (detail::support_size(s) < 2) continue;
    const bool maximal = std::none_of(fixed_faces.begin(), fixed_faces.end(), [&](const Support& t) {
      return t != s && detail::subset_of(s, t);
    });
    if (maximal) cat.entries.push_back(detail::make_family(s, p));
  }

  // Points determined by a positive force of infection (b > 0 only).
  if (p.b > 0.0) {
    const auto c = force_equation_coefficients(p);
    auto roots = solve_quadratic(c.c2, c.c1, c.c0);
    std::sort(roots.rbegin(), roots.rend());
    int n_found = 0;
    for (double a : roots) {
      if (!(a > 0.0)) continue;
      const Vec4 pt = point_from_force(p, a);
      if (!detail::on_simplex(pt)) continue;
      const auto s = SimplexPoint::unchecked(pt);
      if (cat.covers(s, 1e-9)) continue;
      std::string label = detail::force_point_label(p);
      if (n_found++ > 0) label += "b";
      FixedPoint fp = detail::make_point(label, pt, p);
      fp.force = a;
      if (fp.residual <= tol::kFixedPoint) cat.entries.push_back(std::move(fp));
    }
  }

  // Cross-check the tabulated case list against what was found.
  for (const auto& cand : detail::tabulated_candidates(p)) {
    if (cand.family) {
      const auto fam = detail::make_family(*cand.family, p);
      const bool covered = std::any_of(cat.entries.begin(), cat.entries.end(), [&](const FixedPoint& e) {
        return e.kind == FixedPointKind::Family && detail::subset_of(*cand.family, e.support);
      });
      if (fam.residual > tol::kFixedPoint) {
        cat.rejected.push_back({cand.label, "face " + fam.description + " is not fixed", fam.residual});
      } else if (!covered) {
        cat.entries.push_back(fam);
      }
      continue;
    }
    const auto s = SimplexPoint::unchecked(*cand.point);
    const double res = fixed_point_residual(s, p);
    if (res > tol::kFixedPoint) {
      cat.rejected.push_back({cand.label, "residual check failed", res});
    } else if (!cat.covers(s, 1e-9)) {
      cat.entries.push_back(detail::make_point(cand.label, *cand.point, p));
    }
  }

  for (auto& e : cat.entries) {
    if (e.kind != FixedPointKind::Point) continue;
    e.stability = e.label == "lambda1" ? classify_lambda1(p) : classify_point(e.point(), p);
  }
  return cat;
}

}  // namespace sisi
