#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "sisi/dynamics.hpp"
#include "sisi/presets.hpp"
#include "support.hpp"

using namespace sisi;

namespace {

const ModelParams kWorked{0.2, 0.3, 0.6, 0.4, 1.0, 1.0};

SimplexPoint start(const Vec4& c) { return SimplexPoint(c[0], c[1], c[2], c[3]); }

}  // namespace

TEST(DetectLimit, FixedStartReportsZeroIterations) {
  const auto r = detect_limit(SimplexPoint(1, 0, 0, 0), kWorked);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0u);
  EXPECT_EQ(r.snapped_to.value_or(""), "lambda1");
}

TEST(DetectLimit, FiguresReachTheirLimits) {
  for (int fig = 1; fig <= 6; ++fig) {
    const auto preset = *figure_preset(fig);
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = detect_limit(start(preset.init), preset.params);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_TRUE(r.converged) << fig;
    EXPECT_EQ(r.snapped_to.value_or(""), preset.expected) << fig;
    EXPECT_LE(r.iterations, 1'000'000u);
    EXPECT_LT(secs, 10.0);
  }
}

TEST(DetectLimit, FigureFourCoordinates) {
  const auto preset = *figure_preset(4);
  const auto r = detect_limit(start(preset.init), preset.params);
  const Vec4 want{0.249303, 0.682452, 0.038935, 0.029310};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(r.limit[i], want[i], 1e-5);
}

TEST(DetectLimit, StopsAtMaxIter) {
  const auto preset = *figure_preset(2);
  LimitOptions opt;
  opt.max_iter = 3;
  const auto r = detect_limit(start(preset.init), preset.params, opt);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3u);
  EXPECT_GT(r.final_step, opt.tol_step);
}

TEST(DetectLimit, RejectsZeroBudgetAndBadParameters) {
  LimitOptions opt;
  opt.max_iter = 0;
  try {
    detect_limit(SimplexPoint(1, 0, 0, 0), kWorked, opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateInput);
  }
  EXPECT_THROW(detect_limit(SimplexPoint(1, 0, 0, 0), {0.9, 0.9, 0.5, 0.5, 1, 1}), Error);
}

TEST(DetectLimit, ObserverSeesEveryIterate) {
  const auto preset = *figure_preset(1);
  std::size_t calls = 0, last = 0;
  const auto r = detect_limit(start(preset.init), preset.params, {}, [&](std::size_t n, const Vec4&) {
    ++calls;
    last = n;
  });
  EXPECT_EQ(calls, last + 1);
  EXPECT_GE(last, r.iterations);
}

TEST(DetectLimit, ReportInvariant) {
  // converged reports end on a short step or on a snapped catalog point
  test::Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    const auto p = test::random_admissible(rng);
    const auto s0 = test::random_point(rng);
    LimitOptions opt;
    opt.max_iter = 20'000;
    const auto r = detect_limit(s0, p, opt);
    if (r.converged) {
      EXPECT_TRUE(r.snapped_to.has_value() || r.final_step <= opt.tol_step);
      EXPECT_LT(fixed_point_residual(r.limit, p), 1e-8);
    } else {
      EXPECT_EQ(r.iterations, opt.max_iter);
    }
    EXPECT_NEAR(r.limit.x() + r.limit.u() + r.limit.y() + r.limit.v(), 1.0, 1e-9);
  }
}

TEST(PredictedLimit, ClosedBothPinsOnlyTheEmptiedClasses) {
  const ModelParams p{0.0, 0.0, 0.5, 0.4, 1.0, 0.8};
  const auto pl = predicted_limit(SimplexPoint(0.2, 0.3, 0.1, 0.4), p);
  ASSERT_TRUE(pl);
  EXPECT_EQ(pl->regime, Regime::ClosedBoth);
  EXPECT_TRUE(pl->depends_on_initial);
  EXPECT_EQ(pl->pinned[0], 0.0);
  EXPECT_FALSE(pl->pinned[1]);
  EXPECT_EQ(pl->pinned[2], 0.0);
  EXPECT_EQ(pl->literal_u, 0.3);
}

TEST(PredictedLimit, SingleStrainEndemicPoint) {
  const ModelParams p{0.2, 0.0, 0.5, 0.3, 1.0, 0.0};
  const auto pl = predicted_limit(SimplexPoint(0.5, 0.2, 0.2, 0.1), p);
  ASSERT_TRUE(pl);
  EXPECT_EQ(pl->target, "lambda9");
  EXPECT_NEAR(*pl->pinned[0], 0.4, 1e-15);
  EXPECT_NEAR(*pl->pinned[1], 0.6, 1e-15);
  const auto r = detect_and_compare(SimplexPoint(0.5, 0.2, 0.2, 0.1), p);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.match, std::optional<bool>(true));
}

TEST(PredictedLimit, ConjectureFlags) {
  const auto fig2 = *figure_preset(2);
  const auto pl2 = predicted_limit(start(fig2.init), fig2.params);
  ASSERT_TRUE(pl2);
  EXPECT_EQ(pl2->regime, Regime::NoReinfectionConjectureSuper);
  EXPECT_TRUE(pl2->conjectural);
  const auto fig4 = *figure_preset(4);
  const auto pl4 = predicted_limit(start(fig4.init), fig4.params);
  ASSERT_TRUE(pl4);
  EXPECT_EQ(pl4->regime, Regime::AllPositiveConjectureSuper);
  EXPECT_EQ(pl4->target, "lambda11");
  const auto pl1 = predicted_limit(SimplexPoint(0.5, 0, 0.5, 0), fig2.params);
  ASSERT_TRUE(pl1);
  EXPECT_FALSE(pl1->conjectural);
}

TEST(PredictedLimit, UncoveredRegimeGivesNothing) {
  EXPECT_FALSE(predicted_limit(SimplexPoint(0.4, 0.2, 0.2, 0.2), {0.3, 0.0, 0.5, 0.0, 1.0, 0.4}));
}

TEST(PredictedLimit, SubcriticalAllPositiveNeedsTheExtraBound) {
  // b(b+alpha) >= alpha beta2 k2 holds for the first set and fails for the second
  const auto s0 = SimplexPoint(0.4, 0.2, 0.2, 0.2);
  const ModelParams ok{0.5, 0.1, 0.4, 0.2, 1.0, 1.0};
  const ModelParams bad{0.05, 0.3, 0.2, 0.9, 1.0, 1.0};
  ASSERT_TRUE(ok.admissible());
  ASSERT_TRUE(bad.admissible());
  const auto pl = predicted_limit(s0, ok);
  ASSERT_TRUE(pl);
  EXPECT_EQ(pl->regime, Regime::AllPositiveConjectureSub);
  EXPECT_FALSE(predicted_limit(s0, bad));
}

TEST(RegimeTable, IdsRoundTrip) {
  EXPECT_EQ(regime_table().size(), 25u);
  for (const auto& info : regime_table()) EXPECT_EQ(regime_from_id(info.id), info.regime);
  EXPECT_FALSE(regime_from_id("nonsense"));
  EXPECT_EQ(proven_regimes().size(), 21u);
}

TEST(VerifyRegime, EveryProvenRegimeHolds) {
  for (const auto r : proven_regimes()) {
    const auto rep = verify_regime(r, 100, 7);
    EXPECT_TRUE(rep.all_passed()) << regime_info(r).id << " " << rep.passes << "/" << rep.trials
                                  << " worst=" << rep.worst_deviation;
    EXPECT_EQ(rep.missing_prediction, 0u) << regime_info(r).id;
  }
}

TEST(VerifyRegime, NoInfectivityIsStatic) {
  const auto rep = verify_regime(Regime::ClosedNoInfectivity, 20, 3);
  EXPECT_TRUE(rep.all_passed());
  EXPECT_EQ(rep.max_iterations, 0u);
}

TEST(VerifyRegime, LiteralClosedReadingFails) {
  const auto rep = verify_regime(Regime::ClosedBoth, 100, 5);
  EXPECT_TRUE(rep.all_passed());
  EXPECT_EQ(rep.literal_reading_holds, 0u);
}

TEST(VerifyRegime, ZeroAttemptsIsUnsatisfiable) {
  try {
    verify_regime(Regime::SingleStrainEndemic, 1, 1, {}, tol::kLimit, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RegimeUnsatisfiable);
  }
}

TEST(VerifyRegime, DeterministicForASeed) {
  const auto a = verify_regime(Regime::NoReinfectionFirstActive, 30, 11);
  const auto b = verify_regime(Regime::NoReinfectionFirstActive, 30, 11);
  EXPECT_EQ(a.worst_deviation, b.worst_deviation);
  EXPECT_EQ(a.max_iterations, b.max_iterations);
}

TEST(Orbits, RecoveredSurplusStaysNonNegativeBelowThreshold) {
  test::Rng rng(42);
  for (int t = 0; t < 200; ++t) {
    ModelParams p{test::uniform(rng, 0.05, 0.5), test::uniform(rng, 0.05, 0.5), 0, 0, 0, 0};
    p.k1 = test::uniform(rng, 0.1, 2.0);
    p.beta1 = test::uniform(rng, 0.0, (p.b + p.alpha) / p.k1);
    if (!p.admissible()) continue;
    // start with b y >= alpha u
    double u = test::uniform(rng, 0.0, 0.3);
    double y = std::min(1.0 - u, p.alpha * u / p.b + test::uniform(rng, 0.0, 0.2));
    if (p.b * y < p.alpha * u) continue;
    const double rest = 1.0 - u - y;
    const double x = test::uniform(rng, 0.0, rest);
    SimplexPoint s(x, u, y, rest - x);
    for (int n = 0; n < 300; ++n) {
      const auto next = apply_V(s, p);
      EXPECT_GE(p.b * next.y() - p.alpha * next.u(), -1e-14);
      EXPECT_LE(next.u(), s.u() + 1e-15);
      EXPECT_LE(next.y(), s.y() + 1e-15);
      s = next;
    }
  }
}

TEST(Orbits, SecondStrainDecaysGeometrically) {
  test::Rng rng(43);
  for (int t = 0; t < 100; ++t) {
    const ModelParams p{test::uniform(rng, 0.05, 0.6), 0.0, test::uniform(rng, 0, 1), test::uniform(rng, 0, 1),
                        test::uniform(rng, 0, 1), 0.0};
    if (!p.admissible()) continue;
    SimplexPoint s = test::random_point(rng);
    const double w0 = s.y() + s.v();
    for (int n = 1; n <= 60; ++n) {
      s = apply_V(s, p);
      const double want = w0 * std::pow(1 - p.b, n);
      EXPECT_NEAR(s.y() + s.v(), want, 1e-12 * std::max(want, 1e-300) + 1e-300);
    }
  }
}

TEST(Scan, IndependentOfThreadCount) {
  auto g = default_grid(Conjecture::AllPositive, 2);
  g.initial_points = 2;
  const auto one = conjecture_scan(Conjecture::AllPositive, g);
  g.threads = 3;
  const auto three = conjecture_scan(Conjecture::AllPositive, g);
  ASSERT_EQ(one.runs.size(), three.runs.size());
  EXPECT_EQ(one.counts, three.counts);
  for (std::size_t i = 0; i < one.runs.size(); ++i) {
    EXPECT_EQ(one.runs[i].cell, three.runs[i].cell);
    EXPECT_EQ(one.runs[i].verdict, three.runs[i].verdict);
    if (one.runs[i].report) {
      EXPECT_EQ(one.runs[i].report->limit.coords(), three.runs[i].report->limit.coords());
    }
  }
  EXPECT_EQ(one.cells, 64u);
  EXPECT_TRUE(one.counterexamples().empty());
}

TEST(Scan, FigureCellsMatch) {
  for (const auto& [which, fig] : {std::pair{Conjecture::NoReinfection, 1}, std::pair{Conjecture::NoReinfection, 2},
                                   std::pair{Conjecture::AllPositive, 3}, std::pair{Conjecture::AllPositive, 4}}) {
    const auto p = figure_preset(fig)->params;
    GridSpec g;
    g.axes = {{{p.b}, {p.alpha}, {p.beta1}, {p.beta2}, {p.k1}, {p.k2}}};
    g.initial_points = 3;
    const auto rep = conjecture_scan(which, g);
    ASSERT_EQ(rep.runs.size(), 3u) << fig;
    for (const auto& run : rep.runs) EXPECT_EQ(run.verdict, Verdict::Match) << fig;
  }
}

TEST(Scan, SkippedCellsAreLabelled) {
  GridSpec g;
  g.axes = {{{0.9}, {0.9}, {0.5}, {0.5}, {1.0}, {1.0}}};
  EXPECT_EQ(conjecture_scan(Conjecture::AllPositive, g).runs.at(0).verdict, Verdict::Inadmissible);
  g.axes = {{{0.2}, {0.3}, {0.5}, {0.5}, {1.0}, {1.0}}};
  EXPECT_EQ(conjecture_scan(Conjecture::NoReinfection, g).runs.at(0).verdict, Verdict::OutOfHypothesis);
}

TEST(Scan, GridCellsEnumerateEveryCombination) {
  const auto g = default_grid(Conjecture::NoReinfection, 3);
  EXPECT_EQ(g.cell_count(), 243u);
  EXPECT_EQ(grid_params(g, 0).b, g.axes[0][0]);
  EXPECT_EQ(grid_params(g, 1).k2, g.axes[5][1]);
  EXPECT_EQ(grid_params(g, 242).b, g.axes[0][2]);
}

TEST(FGCurves, WorkedInstanceCrossing) {
  const auto c = fg_curves(kWorked, 200'001);
  ASSERT_EQ(c.sign_changes, 1);
  EXPECT_NEAR(c.crossings[0], (5 + std::sqrt(145.0)) / 60, 1e-9);
  EXPECT_DOUBLE_EQ(c.slope_f, kWorked.beta1);
  EXPECT_NEAR(c.g[0], c.g_at_zero, 1e-15);
}

TEST(FGCurves, SubcriticalHasNoCrossing) {
  EXPECT_EQ(fg_curves(figure_preset(6)->params, 2001).sign_changes, 0);
}

TEST(FGCurves, ZeroBirthRateRaises) {
  try {
    fg_curves({0.0, 0.3, 0.5, 0.4, 1, 1}, 11);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateRegime);
  }
}

TEST(FGCurves, CrossingsAreQuadraticRoots) {
  test::Rng rng(44);
  int checked = 0, mismatched = 0;
  for (int t = 0; t < 300; ++t) {
    auto p = test::random_admissible(rng);
    if (!(p.b > 0.01 && p.beta1 > 0.05 && p.beta2 > 0.05 && std::max(p.k1, p.k2) > 0.05)) continue;
    const int n = 20'001;
    const auto c = fg_curves(p, n);
    const double h = std::max(p.k1, p.k2) / (n - 1);
    const auto q = interior_quadratic(p);
    std::vector<double> roots;
    for (double r : q.roots)
      if (r > h && r < std::max(p.k1, p.k2) - h) roots.push_back(r);
    if (roots.size() != c.crossings.size()) {  // near-tangency within one grid cell
      ++mismatched;
      continue;
    }
    for (std::size_t i = 0; i < roots.size(); ++i) EXPECT_NEAR(c.crossings[i], roots[i], h);
    checked += static_cast<int>(roots.size());
  }
  EXPECT_GT(checked, 20);
  EXPECT_LE(mismatched, 2);
}
