#include "jcas/manifold.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "jcas/rng.hpp"

namespace jcas {
namespace {

CMat random_cn(Rng& rng, int rows, int cols) {
  CMat m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.cnormal();
  }
  return m;
}

CMat random_sphere(Rng& rng, int rows, int cols, double radius) {
  CMat m = random_cn(rng, rows, cols);
  return (radius / m.norm()) * m;
}

CMat random_circle(Rng& rng, int rows, int cols) {
  CMat m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = std::polar(1.0, rng.uniform(0.0, 6.28));
  }
  return m;
}

TEST(TangentProject, SphereRemovesRadialDirection) {
  Rng rng(1);
  const auto m = ManifoldSpec::power_sphere(2.0, 4, 3);
  const CMat p = random_sphere(rng, 4, 3, 2.0);
  const CMat t = tangent_project(m, p, cxd(1.7, 0.0) * p);
  EXPECT_NEAR(t.norm(), 0.0, 1e-12);
}

TEST(TangentProject, CircleKeepsTangentUnchanged) {
  Rng rng(2);
  const auto m = ManifoldSpec::complex_circle(5);
  const CMat p = random_circle(rng, 5, 1);
  CMat g = random_cn(rng, 5, 1);
  const CMat t = tangent_project(m, p, g);
  const CMat t2 = tangent_project(m, p, t);
  EXPECT_NEAR((t - t2).norm(), 0.0, 1e-12);
}

TEST(TangentProject, TangencyResiduals) {
  Rng rng(3);
  const auto sphere = ManifoldSpec::power_sphere(3.0, 6, 2);
  const auto circle = ManifoldSpec::complex_circle(6);
  for (int trial = 0; trial < 50; ++trial) {
    const CMat p = random_sphere(rng, 6, 2, 3.0);
    const CMat g = random_cn(rng, 6, 2);
    const CMat t = tangent_project(sphere, p, g);
    EXPECT_LE(std::abs(real_inner(t, p)), 1e-10 * g.norm());

    const CMat pc = random_circle(rng, 6, 1);
    const CMat gc = random_cn(rng, 6, 1);
    const CMat tc = tangent_project(circle, pc, gc);
    const double residual = (tc.cwiseProduct(pc.conjugate())).real().cwiseAbs().maxCoeff();
    EXPECT_LE(residual, 1e-10);
  }
}

TEST(TangentProject, StrictSphereIsIdempotent) {
  Rng rng(4);
  const auto m = ManifoldSpec::power_sphere(1.5, 5, 4);
  const CMat p = random_sphere(rng, 5, 4, 1.5);
  const CMat g = random_cn(rng, 5, 4);
  const CMat once = tangent_project(m, p, g);
  const CMat twice = tangent_project(m, p, once);
  EXPECT_NEAR((once - twice).norm(), 0.0, 1e-12 * std::max(1.0, once.norm()));
}

TEST(TangentProject, RejectsOffManifoldPoint) {
  const auto m = ManifoldSpec::power_sphere(1.0, 2, 2);
  EXPECT_THROW(tangent_project(m, CMat::Ones(2, 2), CMat::Ones(2, 2)), std::invalid_argument);
}

TEST(Retract, ZeroStepKeepsPoint) {
  Rng rng(5);
  const auto m = ManifoldSpec::power_sphere(2.5, 3, 3);
  const CMat p = random_sphere(rng, 3, 3, 2.5);
  const CMat t = random_cn(rng, 3, 3);
  EXPECT_NEAR((retract(m, p, t, 0.0) - p).norm(), 0.0, 1e-12);
}

TEST(Retract, SphereNormIsRadius) {
  Rng rng(6);
  const auto m = ManifoldSpec::power_sphere(3.7, 4, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const CMat p = random_sphere(rng, 4, 2, 3.7);
    const CMat t = random_cn(rng, 4, 2);
    EXPECT_NEAR(retract(m, p, t, rng.uniform(0.0, 2.0)).norm(), 3.7, 1e-9);
  }
}

TEST(Retract, CircleScalarExample) {
  const auto m = ManifoldSpec::complex_circle(1);
  CMat p = CMat::Ones(1, 1);
  CMat t(1, 1);
  t(0, 0) = cxd(0.0, 1.0);
  const CMat r = retract(m, p, t, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(r(0, 0) - cxd(s, s)), 0.0, 1e-12);
}

TEST(Retract, ThrowsOnVanishingEntry) {
  const auto m = ManifoldSpec::complex_circle(1);
  CMat p = CMat::Ones(1, 1);
  CMat t = -CMat::Ones(1, 1);
  EXPECT_THROW(retract(m, p, t, 1.0), std::domain_error);
}

TEST(PolakRibiere, VanishesWhenGradientUnchanged) {
  Rng rng(7);
  const CMat g = random_cn(rng, 4, 1);
  EXPECT_NEAR(polak_ribiere_beta(g, g, g, false), 0.0, 1e-12);
}

TEST(PolakRibiere, ReducesToFletcherReevesWhenTransportVanishes) {
  Rng rng(8);
  const CMat g_now = random_cn(rng, 4, 1);
  const CMat g_prev = random_cn(rng, 4, 1);
  const double expected = real_inner(g_now, g_now) / real_inner(g_prev, g_prev);
  EXPECT_NEAR(polak_ribiere_beta(g_now, g_prev, CMat::Zero(4, 1), false), expected, 1e-12);
}

TEST(PolakRibiere, MatchesDirectInnerProducts) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const CMat g_now = random_cn(rng, 5, 2);
    const CMat g_prev = random_cn(rng, 5, 2);
    const CMat transported = random_cn(rng, 5, 2);
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < g_now.size(); ++i) {
      num += std::real(std::conj(g_now(i)) * (g_now(i) - transported(i)));
      den += std::norm(g_prev(i));
    }
    EXPECT_NEAR(polak_ribiere_beta(g_now, g_prev, transported, false), num / den,
                1e-12 * std::abs(num / den) + 1e-12);
    EXPECT_GE(polak_ribiere_beta(g_now, g_prev, transported, true), 0.0);
  }
}

TEST(PolakRibiere, RejectsZeroPreviousGradient) {
  EXPECT_THROW(polak_ribiere_beta(CMat::Ones(2, 1), CMat::Zero(2, 1), CMat::Zero(2, 1), false),
               std::invalid_argument);
}

CostOracle scalar_circle_cost() {
  // f(v) = |v - 1|^2 on the unit circle.
  CostOracle oracle;
  oracle.cost = [](const CMat& v) { return std::norm(v(0, 0) - cxd(1.0, 0.0)); };
  oracle.grad = [](const CMat& v) {
    CMat g(1, 1);
    g(0, 0) = 2.0 * (v(0, 0) - cxd(1.0, 0.0));
    return g;
  };
  return oracle;
}

TEST(Armijo, FindsDecreaseOnScalarCircle) {
  // Pure line-search check along the (Euclidean) steepest descent direction;
  // at v = -1 the Riemannian gradient vanishes, the ambient one does not.
  const auto m = ManifoldSpec::complex_circle(1);
  const CostOracle oracle = scalar_circle_cost();
  CMat p(1, 1);
  p(0, 0) = cxd(-1.0, 0.0);
  const CMat dir = -oracle.grad(p);
  const double c0 = oracle.cost(p);
  RcgSettings settings;
  const double slope = real_inner(oracle.grad(p), dir);
  ASSERT_LT(slope, 0.0);
  const double step = armijo_step(oracle, m, p, dir, settings, c0, slope);
  EXPECT_LT(oracle.cost(retract(m, p, dir, step)), c0);
}

TEST(Armijo, ConstantCostAcceptsInitialStep) {
  const auto m = ManifoldSpec::complex_circle(2);
  CostOracle oracle;
  oracle.cost = [](const CMat&) { return 3.0; };
  oracle.grad = [](const CMat& v) { return CMat::Zero(v.rows(), v.cols()).eval(); };
  CMat p = CMat::Ones(2, 1);
  RcgSettings settings;
  settings.armijo_initial_step = 0.7;
  const double step = armijo_step(oracle, m, p, CMat::Ones(2, 1) * cxd(0.0, 1.0), settings, 3.0,
                                  0.0);
  EXPECT_NEAR(step, 0.7, 1e-15);
}

TEST(Armijo, AcceptedStepSatisfiesSufficientDecrease) {
  Rng rng(11);
  const auto m = ManifoldSpec::power_sphere(1.0, 3, 1);
  const CMat a = random_cn(rng, 3, 3);
  const CMat target = random_cn(rng, 3, 1);
  CostOracle oracle;
  oracle.cost = [a, target](const CMat& v) { return (a * v - target).squaredNorm(); };
  oracle.grad = [a, target](const CMat& v) {
    return (2.0 * (a.adjoint() * (a * v - target))).eval();
  };
  const CMat p = random_sphere(rng, 3, 1, 1.0);
  const CMat grad = tangent_project(m, p, oracle.grad(p));
  const CMat dir = -grad;
  const double c0 = oracle.cost(p);
  const double slope = real_inner(grad, dir);
  RcgSettings settings;
  const double step = armijo_step(oracle, m, p, dir, settings, c0, slope);
  EXPECT_LE(oracle.cost(retract(m, p, dir, step)), c0 + settings.armijo_c1 * step * slope + 1e-12);
}

TEST(Armijo, ThrowsWhenNoStepDecreases) {
  const auto m = ManifoldSpec::complex_circle(1);
  const CostOracle oracle = scalar_circle_cost();
  CMat p = CMat::Ones(1, 1);  // global minimum; tangent ascent direction
  CMat dir(1, 1);
  dir(0, 0) = cxd(0.0, 1.0);
  RcgSettings settings;
  EXPECT_THROW(armijo_step(oracle, m, p, dir, settings, oracle.cost(p), -1.0), ArmijoFailure);
}

TEST(RcgMinimize, ScalarCircleConvergesToOne) {
  const auto m = ManifoldSpec::complex_circle(1);
  CMat init(1, 1);
  init(0, 0) = cxd(0.0, 1.0);
  RcgSettings settings;
  settings.max_iters = 200;
  settings.grad_tol = 1e-9;
  const RcgResult res = rcg_minimize(scalar_circle_cost(), m, init, settings);
  EXPECT_NEAR(std::abs(res.point(0, 0) - cxd(1.0, 0.0)), 0.0, 1e-6);
  EXPECT_LE(res.cost, res.cost_history.front());
}

TEST(RcgMinimize, ZeroIterationBudgetReturnsInit) {
  const auto m = ManifoldSpec::complex_circle(1);
  CMat init(1, 1);
  init(0, 0) = cxd(0.0, 1.0);
  RcgSettings settings;
  settings.max_iters = 0;
  const RcgResult res = rcg_minimize(scalar_circle_cost(), m, init, settings);
  EXPECT_EQ(res.iterations, 0);
  EXPECT_NEAR((res.point - init).norm(), 0.0, 1e-15);
}

TEST(RcgMinimize, TwoElementCircleMatchesGridSearch) {
  // Coarse grid here; the acceptance suite repeats this at 0.1 degrees.
  Rng rng(12);
  const CMat a = random_cn(rng, 2, 2);
  const CVec b = CVec(random_cn(rng, 2, 1));
  CostOracle oracle;
  oracle.cost = [a, b](const CMat& v) { return (a * v - b).squaredNorm(); };
  oracle.grad = [a, b](const CMat& v) { return (2.0 * (a.adjoint() * (a * v - b))).eval(); };

  double grid_best = 1e300;
  const int steps = 720;  // 0.5 degrees
  for (int i = 0; i < steps; ++i) {
    for (int j = 0; j < steps; ++j) {
      CMat v(2, 1);
      v(0, 0) = std::polar(1.0, 2.0 * std::numbers::pi * i / steps);
      v(1, 0) = std::polar(1.0, 2.0 * std::numbers::pi * j / steps);
      grid_best = std::min(grid_best, oracle.cost(v));
    }
  }

  const auto m = ManifoldSpec::complex_circle(2);
  RcgSettings settings;
  settings.max_iters = 500;
  settings.grad_tol = 1e-10;
  double rcg_best = 1e300;
  for (int s = 0; s < 8; ++s) {
    Rng init_rng(derive_seed(500, s));
    const RcgResult res = rcg_minimize(oracle, m, random_circle(init_rng, 2, 1), settings);
    rcg_best = std::min(rcg_best, res.cost);
  }
  EXPECT_NEAR(rcg_best, grid_best, 1e-3);
}

TEST(RcgMinimize, IteratesStayOnManifoldAndCostsDecrease) {
  Rng rng(13);
  const auto m = ManifoldSpec::power_sphere(2.0, 4, 2);
  const CMat a = random_cn(rng, 8, 8);
  CostOracle oracle;
  oracle.cost = [a](const CMat& w) {
    const Eigen::Map<const CVec> flat(w.data(), w.size());
    return (a * flat).squaredNorm();
  };
  oracle.grad = [a](const CMat& w) {
    const Eigen::Map<const CVec> flat(w.data(), w.size());
    const CVec g = 2.0 * (a.adjoint() * (a * flat));
    return CMat(Eigen::Map<const CMat>(g.data(), w.rows(), w.cols()));
  };
  const RcgResult res = rcg_minimize(oracle, m, random_sphere(rng, 4, 2, 2.0), RcgSettings{});
  EXPECT_LE(res.max_constraint_violation, 1e-9);
  for (std::size_t i = 1; i < res.cost_history.size(); ++i) {
    EXPECT_LE(res.cost_history[i], res.cost_history[i - 1] + 1e-12);
  }
}

TEST(FiniteDifferenceCheck, ValidatesAnalyticGradient) {
  Rng rng(14);
  const CMat a = random_cn(rng, 6, 6);
  CostOracle oracle;
  oracle.cost = [a](const CMat& w) {
    const Eigen::Map<const CVec> flat(w.data(), w.size());
    return (a * flat).squaredNorm();
  };
  oracle.grad = [a](const CMat& w) {
    const Eigen::Map<const CVec> flat(w.data(), w.size());
    const CVec g = 2.0 * (a.adjoint() * (a * flat));
    return CMat(Eigen::Map<const CMat>(g.data(), w.rows(), w.cols()));
  };
  const CMat point = random_cn(rng, 3, 2);
  const FdCheck check = finite_difference_check(oracle, point, 12, 1e-6, 99);
  EXPECT_LE(check.max_rel_error, 1e-6);
  EXPECT_NEAR(check.scale, 1.0, 1e-6);
}

TEST(FiniteDifferenceCheck, DetectsBrokenGradient) {
  Rng rng(15);
  const CMat a = random_cn(rng, 4, 4);
  CostOracle oracle;
  oracle.cost = [a](const CMat& w) {
    const Eigen::Map<const CVec> flat(w.data(), w.size());
    return (a * flat).squaredNorm();
  };
  oracle.grad = [a](const CMat& w) {
    const Eigen::Map<const CVec> flat(w.data(), w.size());
    CVec g = 2.0 * (a.adjoint() * (a * flat));
    g(0) = -g(0);  // deliberate sign flip
    return CMat(Eigen::Map<const CMat>(g.data(), w.rows(), w.cols()));
  };
  const FdCheck check = finite_difference_check(oracle, random_cn(rng, 4, 1), 16, 1e-6, 100);
  EXPECT_GT(check.max_rel_error, 1e-4);
}

}  // namespace
}  // namespace jcas
