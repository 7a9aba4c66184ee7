#pragma once

// Cubic heredity matrix P_{ij,k} of the SISI operator written as a quadratic
// stochastic operator (QSO) x'_k = sum_ij P_{ij,k} x_i x_j.
//
// Indices are 0-based in code. Everything that is printed (reports, CSV
// export, error messages) uses 1-based indices, converted in entry_name().

#include <array>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "sisi/error.hpp"
#include "sisi/format.hpp"
#include "sisi/model.hpp"

namespace sisi {

class QsoTensor {
 public:
  QsoTensor() { p_.fill(0.0); }

  double& operator()(int i, int j, int k) { return p_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return p_[index(i, j, k)]; }

  /// Sets P_{ij,k} and P_{ji,k}.
  void set_symmetric(int i, int j, int k, double value) {
    (*this)(i, j, k) = value;
    (*this)(j, i, k) = value;
  }

  static QsoTensor uniform(double value) {
    QsoTensor t;
    t.p_.fill(value);
    return t;
  }

 private:
  static constexpr int index(int i, int j, int k) { return (i * 4 + j) * 4 + k; }
  std::array<double, 64> p_;
};

inline std::string entry_name(int i, int j, int k) {
  return "P_{" + std::to_string(i + 1) + std::to_string(j + 1) + "," + std::to_string(k + 1) + "}";
}

/// A listed heredity relation: multiplicity * P_{ij,k} = value(params).
/// Indices are 1-based to mirror how the relations are usually written.
struct HeredityRelation {
  int i, j, k;
  int multiplicity;  // 1 for diagonal pairs, 2 for i != j
  const char* formula;
  double (*value)(const ModelParams&);
};

inline const std::vector<HeredityRelation>& heredity_relations() {
  using P = ModelParams;
  static const std::vector<HeredityRelation> relations{
      {1, 1, 1, 1, "1", [](const P&) { return 1.0; }},
      {1, 2, 1, 2, "1+b-beta1*k1", [](const P& p) { return 1 + p.b - p.beta1 * p.k1; }},
      {1, 3, 1, 2, "1+b", [](const P& p) { return 1 + p.b; }},
      {1, 4, 1, 2, "1+b-beta1*k2", [](const P& p) { return 1 + p.b - p.beta1 * p.k2; }},
      {2, 2, 1, 1, "b", [](const P& p) { return p.b; }},
      {2, 3, 1, 2, "2b", [](const P& p) { return 2 * p.b; }},
      {2, 4, 1, 2, "2b", [](const P& p) { return 2 * p.b; }},
      {3, 3, 1, 1, "b", [](const P& p) { return p.b; }},
      {3, 4, 1, 2, "2b", [](const P& p) { return 2 * p.b; }},
      {4, 4, 1, 1, "b", [](const P& p) { return p.b; }},

      {1, 2, 2, 2, "1-b-alpha+beta1*k1", [](const P& p) { return 1 - p.b - p.alpha + p.beta1 * p.k1; }},
      {1, 4, 2, 2, "beta1*k2", [](const P& p) { return p.beta1 * p.k2; }},
      {2, 2, 2, 1, "1-b-alpha", [](const P& p) { return 1 - p.b - p.alpha; }},
      {2, 3, 2, 2, "1-b-alpha", [](const P& p) { return 1 - p.b - p.alpha; }},
      {2, 4, 2, 2, "1-b-alpha", [](const P& p) { return 1 - p.b - p.alpha; }},

      {1, 2, 3, 2, "alpha", [](const P& p) { return p.alpha; }},
      {1, 3, 3, 2, "1-b", [](const P& p) { return 1 - p.b; }},
      {2, 2, 3, 1, "alpha", [](const P& p) { return p.alpha; }},
      {2, 3, 3, 2, "1-b+alpha-beta2*k1", [](const P& p) { return 1 - p.b + p.alpha - p.beta2 * p.k1; }},
      {2, 4, 3, 2, "alpha", [](const P& p) { return p.alpha; }},
      {3, 3, 3, 1, "1-b", [](const P& p) { return 1 - p.b; }},
      {3, 4, 3, 2, "1-b-beta2*k2", [](const P& p) { return 1 - p.b - p.beta2 * p.k2; }},

      {1, 4, 4, 2, "1-b", [](const P& p) { return 1 - p.b; }},
      {2, 3, 4, 2, "beta2*k1", [](const P& p) { return p.beta2 * p.k1; }},
      {2, 4, 4, 2, "1-b", [](const P& p) { return 1 - p.b; }},
      {3, 4, 4, 2, "1-b+beta2*k2", [](const P& p) { return 1 - p.b + p.beta2 * p.k2; }},
      {4, 4, 4, 1, "1-b", [](const P& p) { return 1 - p.b; }},
  };
  return relations;
}

/// Fills the tensor from the relations without checking bounds. Row sums are
/// 1 for any parameter values; the [0,1] bounds hold only for admissible
/// parameters.
inline QsoTensor assemble_tensor(const ModelParams& p) {
  QsoTensor t;
  for (const auto& r : heredity_relations()) {
    t.set_symmetric(r.i - 1, r.j - 1, r.k - 1, r.value(p) / r.multiplicity);
  }
  return t;
}

inline QsoTensor build_tensor(const ModelParams& p) {
  require_non_negative(p);
  const QsoTensor t = assemble_tensor(p);
  for (const auto& r : heredity_relations()) {
    const double value = t(r.i - 1, r.j - 1, r.k - 1);
    if (value < -tol::kIdentity || value > 1.0 + tol::kIdentity) {
      std::string lhs = entry_name(r.i - 1, r.j - 1, r.k - 1);
      std::string rhs = r.multiplicity == 2 ? "(" + std::string(r.formula) + ")/2" : r.formula;
      throw Error(ErrorKind::InadmissibleParams,
                  lhs + " = " + rhs + " = " + format_double(value) + " not in [0,1]");
    }
  }
  return t;
}

enum class AxiomKind { Negative, AboveOne, Asymmetric, RowSum };

inline const char* to_string(AxiomKind k) {
  switch (k) {
    case AxiomKind::Negative: return "negative";
    case AxiomKind::AboveOne: return "above-one";
    case AxiomKind::Asymmetric: return "asymmetric";
    case AxiomKind::RowSum: return "row-sum";
  }
  return "?";
}

struct AxiomViolation {
  AxiomKind kind;
  int i, j, k;       // 1-based; k == 0 for row-sum violations
  double magnitude;  // size of the breach
};

struct AxiomReport {
  std::vector<AxiomViolation> violations;

  bool ok() const { return violations.empty(); }
};

inline AxiomReport check_axioms(const QsoTensor& t, double tolerance = tol::kIdentity) {
  AxiomReport report;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double row = 0.0;
      for (int k = 0; k < 4; ++k) {
        const double pij = t(i, j, k);
        row += pij;
        if (pij < -tolerance) report.violations.push_back({AxiomKind::Negative, i + 1, j + 1, k + 1, -pij});
        if (pij > 1.0 + tolerance) {
          report.violations.push_back({AxiomKind::AboveOne, i + 1, j + 1, k + 1, pij - 1.0});
        }
        const double asym = std::abs(pij - t(j, i, k));
        if (i < j && asym > tolerance) {
          report.violations.push_back({AxiomKind::Asymmetric, i + 1, j + 1, k + 1, asym});
        }
      }
      if (std::abs(row - 1.0) > tolerance) {
        report.violations.push_back({AxiomKind::RowSum, i + 1, j + 1, 0, std::abs(row - 1.0)});
      }
    }
  }
  return report;
}

/// Homogeneous quadratic form x'_k = sum_ij P_{ij,k} x_i x_j on R^4.
inline Vec4 apply_qso_raw(const QsoTensor& t, const Vec4& s) {
  Vec4 out{0.0, 0.0, 0.0, 0.0};
  for (int k = 0; k < 4; ++k) {
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) acc += t(i, j, k) * s[i] * s[j];
    }
    out[k] = acc;
  }
  return out;
}

inline SimplexPoint apply_qso(const QsoTensor& t, const SimplexPoint& s) {
  const auto report = check_axioms(t);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw Error(ErrorKind::InvalidTensor, std::string(to_string(v.kind)) + " at (" + std::to_string(v.i) +
                                              "," + std::to_string(v.j) + "," + std::to_string(v.k) +
                                              ") by " + format_double(v.magnitude));
  }
  return SimplexPoint::unchecked(apply_qso_raw(t, s.coords()));
}

/// 64 rows "i,j,k,value" (1-based) after a header line.
inline void write_tensor_csv(std::ostream& os, const QsoTensor& t) {
  os << "i,j,k,value\n";
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        os << i + 1 << ',' << j + 1 << ',' << k + 1 << ',' << format_double(t(i, j, k)) << '\n';
      }
    }
  }
}

}  // namespace sisi
