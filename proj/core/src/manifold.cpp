#include "jcas/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jcas/rng.hpp"

namespace jcas {

namespace {
constexpr double kOnManifoldTol = 1e-6;
constexpr int kMaxBacktracks = 50;
constexpr double kTiny = 1e-300;
}  // namespace

ManifoldSpec ManifoldSpec::power_sphere(double radius, Eigen::Index rows, Eigen::Index cols,
                                        SphereProjection mode) {
  if (radius <= 0.0) throw std::invalid_argument("sphere radius must be positive");
  if (rows < 1 || cols < 1) throw std::invalid_argument("manifold shape must be positive");
  ManifoldSpec m;
  m.kind = Kind::kPowerSphere;
  m.rows = rows;
  m.cols = cols;
  m.radius = radius;
  m.projection_mode = mode;
  return m;
}

ManifoldSpec ManifoldSpec::complex_circle(Eigen::Index rows, Eigen::Index cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("manifold shape must be positive");
  ManifoldSpec m;
  m.kind = Kind::kComplexCircle;
  m.rows = rows;
  m.cols = cols;
  return m;
}

double ManifoldSpec::constraint_violation(const CMat& point) const {
  if (kind == Kind::kPowerSphere) {
    return std::abs(point.norm() - radius);
  }
  return (point.cwiseAbs().array() - 1.0).abs().maxCoeff();
}

CMat tangent_project(const ManifoldSpec& m, const CMat& point, const CMat& ambient) {
  if (m.constraint_violation(point) > kOnManifoldTol) {
    throw std::invalid_argument("tangent_project: point is off the manifold");
  }
  if (m.kind == ManifoldSpec::Kind::kPowerSphere &&
      m.projection_mode == ManifoldSpec::SphereProjection::kStrict) {
    const double r2 = m.radius * m.radius;
    CMat t = ambient - (real_inner(point, ambient) / r2) * point;
    // One refinement pass keeps Re<T, W> at roundoff level even when the
    // tangential component is orders of magnitude below the radial one.
    t -= (real_inner(point, t) / r2) * point;
    return t;
  }
  // Circle manifold and the literal sphere rule share the entrywise form
  // T = G - Re{G .* conj(P)} .* P.
  return ambient - (ambient.cwiseProduct(point.conjugate())).real().cast<cxd>().cwiseProduct(point);
}

CMat retract(const ManifoldSpec& m, const CMat& point, const CMat& tangent, double step) {
  CMat moved = point + step * tangent;
  if (m.kind == ManifoldSpec::Kind::kPowerSphere) {
    const double norm = moved.norm();
    if (norm < kTiny) throw std::domain_error("retract: zero norm after the step");
    return (m.radius / norm) * moved;
  }
  for (Eigen::Index i = 0; i < moved.size(); ++i) {
    const double mod = std::abs(moved(i));
    if (mod < kTiny) throw std::domain_error("retract: entry vanished after the step");
    moved(i) /= mod;
  }
  return moved;
}

double polak_ribiere_beta(const CMat& g_now, const CMat& g_prev, const CMat& prev_projected,
                          bool pr_plus) {
  const double denom = real_inner(g_prev, g_prev);
  if (denom <= 0.0) throw std::invalid_argument("polak_ribiere: previous gradient has zero norm");
  double beta = real_inner(g_now, g_now - prev_projected) / denom;
  if (pr_plus) beta = std::max(beta, 0.0);
  return beta;
}

double armijo_step(const CostOracle& oracle, const ManifoldSpec& m, const CMat& point,
                   const CMat& direction, const RcgSettings& settings, double cost_at_point,
                   double dir_deriv) {
  double step = settings.armijo_initial_step;
  for (int i = 0; i < kMaxBacktracks; ++i) {
    const double trial = oracle.cost(retract(m, point, direction, step));
    if (trial <= cost_at_point + settings.armijo_c1 * step * dir_deriv) {
      return step;
    }
    step *= settings.armijo_shrink;
  }
  throw ArmijoFailure("armijo_step: no acceptable step within 50 backtracks");
}

namespace {

double tangency_residual(const ManifoldSpec& m, const CMat& point, const CMat& tangent) {
  if (m.kind == ManifoldSpec::Kind::kPowerSphere) {
    const double scale = tangent.norm() * point.norm();
    if (scale < kTiny) return 0.0;
    return std::abs(real_inner(tangent, point)) / scale;
  }
  const double scale = tangent.cwiseAbs().maxCoeff();
  if (scale < kTiny) return 0.0;
  return (tangent.cwiseProduct(point.conjugate())).real().cwiseAbs().maxCoeff() / scale;
}

}  // namespace

RcgResult rcg_minimize(const CostOracle& oracle, const ManifoldSpec& m, const CMat& init,
                       const RcgSettings& settings) {
  RcgResult res;
  res.point = init;
  res.cost = oracle.cost(init);
  if (!std::isfinite(res.cost)) throw std::domain_error("rcg_minimize: non-finite cost");
  res.cost_history.push_back(res.cost);
  res.max_constraint_violation = m.constraint_violation(init);

  CMat euclid = oracle.grad(res.point);
  if (!euclid.allFinite()) throw std::domain_error("rcg_minimize: non-finite gradient");
  CMat grad = tangent_project(m, res.point, euclid);
  res.max_tangency_residual = tangency_residual(m, res.point, grad);
  res.grad_norm_history.push_back(grad.norm());
  CMat direction = -grad;

  // Step memory: the backtracking start shrinks when a step realizes much
  // less decrease than its linear model predicts (overshoot past a valley)
  // and relaxes again after comfortable first-try acceptances. A fixed start
  // oscillates indefinitely around minimizers on the circle manifold.
  double trial_step = settings.armijo_initial_step;

  for (int q = 0; q < settings.max_iters; ++q) {
    if (grad.norm() <= settings.grad_tol) break;

    double dir_deriv = real_inner(grad, direction);
    if (dir_deriv >= 0.0) {  // conjugacy lost; restart along steepest descent
      direction = -grad;
      dir_deriv = -real_inner(grad, grad);
    }

    RcgSettings line = settings;
    line.armijo_initial_step = trial_step;
    double step = 0.0;
    try {
      step = armijo_step(oracle, m, res.point, direction, line, res.cost, dir_deriv);
    } catch (const ArmijoFailure&) {
      break;  // numerical floor reached; current iterate is the answer
    }

    const CMat next = retract(m, res.point, direction, step);
    const double next_cost = oracle.cost(next);
    const double predicted = -step * dir_deriv;
    const double achieved = res.cost - next_cost;
    if (achieved < 0.25 * predicted) {
      trial_step = std::max(step * settings.armijo_shrink, 1e-20);
    } else if (step == trial_step && achieved > 0.75 * predicted) {
      trial_step = std::min(step / settings.armijo_shrink, 1e20);
    }
    CMat next_euclid = oracle.grad(next);
    if (!std::isfinite(next_cost) || !next_euclid.allFinite()) {
      throw std::domain_error("rcg_minimize: non-finite cost or gradient");
    }
    CMat next_grad = tangent_project(m, next, next_euclid);
    const CMat transported_grad = tangent_project(m, next, grad);
    const CMat transported_dir = tangent_project(m, next, direction);

    const double beta = polak_ribiere_beta(next_grad, grad, transported_grad, settings.pr_plus);
    direction = -next_grad + beta * transported_dir;

    res.point = next;
    res.cost = next_cost;
    grad = std::move(next_grad);
    res.iterations = q + 1;
    res.cost_history.push_back(res.cost);
    res.grad_norm_history.push_back(grad.norm());
    res.max_constraint_violation =
        std::max(res.max_constraint_violation, m.constraint_violation(res.point));
    res.max_tangency_residual =
        std::max(res.max_tangency_residual, tangency_residual(m, res.point, grad));
  }
  return res;
}

FdCheck finite_difference_check(const CostOracle& oracle, const CMat& point, int n_coords,
                                double step, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> fd;
  std::vector<double> an;
  const CMat analytic = oracle.grad(point);
  for (int c = 0; c < n_coords; ++c) {
    const Eigen::Index idx = rng.next_u64() % static_cast<std::uint64_t>(point.size());
    const Eigen::Index row = idx % point.rows();
    const Eigen::Index col = idx / point.rows();
    for (int axis = 0; axis < 2; ++axis) {
      const cxd delta = (axis == 0) ? cxd(step, 0.0) : cxd(0.0, step);
      CMat plus = point;
      CMat minus = point;
      plus(row, col) += delta;
      minus(row, col) -= delta;
      fd.push_back((oracle.cost(plus) - oracle.cost(minus)) / (2.0 * step));
      const cxd g = analytic(row, col);
      an.push_back(axis == 0 ? g.real() : g.imag());
    }
  }
  FdCheck out;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < fd.size(); ++i) {
    num += fd[i] * an[i];
    den += an[i] * an[i];
  }
  out.scale = (den > kTiny && num > 0.0) ? num / den : 1.0;
  double ref = kTiny;
  for (double v : fd) ref = std::max(ref, std::abs(v));
  if (ref <= kTiny) ref = 1e-12;  // both sides vanish: report absolute error
  double worst = 0.0;
  for (std::size_t i = 0; i < fd.size(); ++i) {
    worst = std::max(worst, std::abs(out.scale * an[i] - fd[i]) / ref);
  }
  out.max_rel_error = worst;
  return out;
}

}  // namespace jcas
