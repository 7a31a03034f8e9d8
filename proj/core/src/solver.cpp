#include "jcas/solver.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <deque>
#include <memory>
#include <stdexcept>

#include "jcas/rng.hpp"

namespace jcas {

namespace {

// Beampattern rows x_{psi,n} = (a_hat(psi) .* v)^H H_br,n^H, one Npsi x Nt
// matrix per subcarrier. Valid while the RIS phases stay fixed.
std::vector<CMat> make_bp_rows(const ChannelSet& ch, const RisPhases& ris,
                               const std::vector<double>& grid_deg) {
  const int n_grid = static_cast<int>(grid_deg.size());
  std::vector<CMat> x(ch.n_sc());
  std::vector<CVec> weights(n_grid);
  for (int g = 0; g < n_grid; ++g) {
    weights[g] = ris_steering(grid_deg[g], ris.size()).cwiseProduct(ris.v());
  }
  for (int n = 0; n < ch.n_sc(); ++n) {
    const CMat h_adj = ch.h_bs_ris[n].adjoint();  // R x Nt
    x[n].resize(n_grid, h_adj.cols());
    for (int g = 0; g < n_grid; ++g) {
      x[n].row(g) = weights[g].adjoint() * h_adj;
    }
  }
  return x;
}

std::vector<CMat> make_combined_columns(const ChannelSet& ch, const RisPhases& ris) {
  std::vector<CMat> h(ch.n_sc());
  const int k_users = static_cast<int>(ch.h_bs_ue[0].cols());
  for (int n = 0; n < ch.n_sc(); ++n) {
    h[n].resize(ch.h_bs_ue[n].rows(), k_users);
    for (int k = 0; k < k_users; ++k) {
      h[n].col(k) = combined_channel(ch, ris, k, n);
    }
  }
  return h;
}

double bp_cost_block(const CMat& x_n, const RMat& ref, int n, const CMat& w_block) {
  const CMat p = x_n * w_block;  // Npsi x K
  double acc = 0.0;
  for (Eigen::Index g = 0; g < p.rows(); ++g) {
    const double e = p.row(g).squaredNorm() - ref(g, n);
    acc += e * e;
  }
  return acc;
}

void bp_grad_block(const CMat& x_n, const RMat& ref, int n, const CMat& w_block,
                   Eigen::Ref<CMat> g_block) {
  const CMat p = x_n * w_block;
  CVec factors(p.rows());
  for (Eigen::Index g = 0; g < p.rows(); ++g) {
    factors(g) = 4.0 * (p.row(g).squaredNorm() - ref(g, n));
  }
  g_block += x_n.adjoint() * (factors.asDiagonal() * p);
}

double pen_cost_block(const CMat& h_n, const RMat& gamma, double sigma2, int n,
                      const CMat& w_block, double rho) {
  const CMat u = h_n.adjoint() * w_block;  // K x K, row k = h_k^H W_n
  double acc = 0.0;
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    const double g = gamma(k, n);
    const double margin = (1.0 + g) * std::norm(u(k, k)) - g * u.row(k).squaredNorm() - sigma2 * g;
    if (margin < 0.0) acc += rho * margin * margin;
  }
  return acc;
}

void pen_grad_block(const CMat& h_n, const RMat& gamma, double sigma2, int n, const CMat& w_block,
                    double rho, Eigen::Ref<CMat> g_block) {
  const CMat u = h_n.adjoint() * w_block;
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    const double g = gamma(k, n);
    const double margin = (1.0 + g) * std::norm(u(k, k)) - g * u.row(k).squaredNorm() - sigma2 * g;
    if (margin >= 0.0) continue;  // feasible branch contributes nothing
    Eigen::RowVectorXcd row = -g * u.row(k);
    row(k) += (1.0 + g) * u(k, k);
    g_block += (4.0 * rho * margin) * (h_n.col(k) * row);
  }
}

struct BlockLayout {
  int n_tx = 0;
  int n_users = 0;
  int n_sc = 0;
};

// Shared data of the full-matrix W oracle.
struct WOracleData {
  std::vector<CMat> x;
  std::vector<CMat> h;
  RMat ref;
  RMat gamma;
  double sigma2 = 0.0;
  double rho1 = 0.0;
  double rho2 = 0.0;
  CMat offset;  // Λ/ρ1 - W_rf (F^H ⊗ I) W_bb
  BlockLayout dims;
};

void check_ref_shape(const RMat& ref_bp, const ScenarioConfig& config) {
  if (ref_bp.rows() != config.n_grid() || ref_bp.cols() != config.n_sc) {
    throw std::invalid_argument("reference beampattern must be grid x subcarrier");
  }
}

}  // namespace

double gamma_prime(const ChannelSet& ch, const RisPhases& ris, const std::vector<CMat>& w_blocks,
                   int k, int n, double gamma_kn) {
  const CVec h = combined_channel(ch, ris, k, n);
  const Eigen::RowVectorXcd u = h.adjoint() * w_blocks[n];
  return (1.0 + gamma_kn) * std::norm(u(k)) - gamma_kn * u.squaredNorm();
}

CostOracle cost_grad_w(const SolverState& state, const ChannelSet& ch, const RMat& ref_bp,
                       const ScenarioConfig& config) {
  check_ref_shape(ref_bp, config);
  auto data = std::make_shared<WOracleData>();
  data->x = make_bp_rows(ch, state.ris, config.angle_grid_deg);
  data->h = make_combined_columns(ch, state.ris);
  data->ref = ref_bp;
  data->gamma = config.sinr_threshold;
  data->sigma2 = config.noise_var_w;
  data->rho1 = state.rho1;
  data->rho2 = state.rho2;
  data->offset = state.dual / state.rho1 - EffectivePrecoder::compose(state.bf).full();
  data->dims = {config.n_tx, config.n_users, config.n_sc};

  CostOracle oracle;
  oracle.cost = [data](const CMat& w) {
    double acc = 0.5 * data->rho1 * (w + data->offset).squaredNorm();
    for (int n = 0; n < data->dims.n_sc; ++n) {
      const CMat block = w.block(static_cast<Eigen::Index>(n) * data->dims.n_tx,
                                 static_cast<Eigen::Index>(n) * data->dims.n_users,
                                 data->dims.n_tx, data->dims.n_users);
      acc += bp_cost_block(data->x[n], data->ref, n, block);
      acc += pen_cost_block(data->h[n], data->gamma, data->sigma2, n, block, data->rho2);
    }
    if (!std::isfinite(acc)) throw std::domain_error("cost_grad_w: non-finite cost");
    return acc;
  };
  oracle.grad = [data](const CMat& w) {
    CMat g = data->rho1 * (w + data->offset);
    for (int n = 0; n < data->dims.n_sc; ++n) {
      const Eigen::Index r0 = static_cast<Eigen::Index>(n) * data->dims.n_tx;
      const Eigen::Index c0 = static_cast<Eigen::Index>(n) * data->dims.n_users;
      const CMat block = w.block(r0, c0, data->dims.n_tx, data->dims.n_users);
      auto g_block = g.block(r0, c0, data->dims.n_tx, data->dims.n_users);
      bp_grad_block(data->x[n], data->ref, n, block, g_block);
      pen_grad_block(data->h[n], data->gamma, data->sigma2, n, block, data->rho2, g_block);
    }
    return g;
  };
  return oracle;
}

CostOracle cost_grad_wrf(const SolverState& state, const ScenarioConfig& config) {
  // The coupling cost is quadratic in the RF precoder; with
  // S = sum_n E_n E_n^H, T = sum_n A_n E_n^H and c0 = sum_n ||A_n||_F^2 it is
  // rho1/2 (c0 - 2 Re<T, Wrf> + Re<Wrf, Wrf S>).
  const int n_sc = config.n_sc;
  const CMat f = dft_matrix(n_sc);
  const Eigen::Index n_rf = state.bf.rf.cols();
  const Eigen::Index n_tx = state.bf.rf.rows();
  const Eigen::Index width = state.w_aux.cols();
  const CMat target = state.w_aux + state.dual / state.rho1;

  auto s = std::make_shared<CMat>(CMat::Zero(n_rf, n_rf));
  auto t = std::make_shared<CMat>(CMat::Zero(n_tx, n_rf));
  double c0 = 0.0;
  for (int n = 0; n < n_sc; ++n) {
    CMat e_n(n_rf, width);  // block-row n of (F^H ⊗ I) W_bb
    for (int m = 0; m < n_sc; ++m) {
      e_n.middleCols(static_cast<Eigen::Index>(m) * state.bf.bb[m].cols(),
                     state.bf.bb[m].cols()) = std::conj(f(m, n)) * state.bf.bb[m];
    }
    const CMat a_n = target.middleRows(static_cast<Eigen::Index>(n) * n_tx, n_tx);
    *s += e_n * e_n.adjoint();
    *t += a_n * e_n.adjoint();
    c0 += a_n.squaredNorm();
  }
  const double rho1 = state.rho1;

  CostOracle oracle;
  oracle.cost = [s, t, c0, rho1](const CMat& rf) {
    const double quad = real_inner(rf, rf * (*s));
    const double cross = real_inner(*t, rf);
    const double acc = 0.5 * rho1 * (c0 - 2.0 * cross + quad);
    if (!std::isfinite(acc)) throw std::domain_error("cost_grad_wrf: non-finite cost");
    return acc;
  };
  oracle.grad = [s, t, rho1](const CMat& rf) { return (rho1 * (rf * (*s) - *t)).eval(); };
  return oracle;
}

std::vector<CMat> update_wbb(const SolverState& state, const ScenarioConfig& config) {
  const CMat f = dft_matrix(config.n_sc);
  const CMat gram = state.bf.rf.adjoint() * state.bf.rf;
  Eigen::SelfAdjointEigenSolver<CMat> es(gram);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > 0.0) || lmax / lmin > 1e12) {
    throw std::runtime_error("update_wbb: degenerate RF precoder (rf^H rf singular)");
  }
  const CMat factor = rf_dft_factor(state.bf.rf, f);
  const CMat m = factor.adjoint() * (state.w_aux + state.dual / state.rho1);
  const auto ldlt = gram.ldlt();
  std::vector<CMat> bb(config.n_sc);
  for (int n = 0; n < config.n_sc; ++n) {
    bb[n] = ldlt.solve(m.block(static_cast<Eigen::Index>(n) * config.n_rf,
                               static_cast<Eigen::Index>(n) * config.n_users, config.n_rf,
                               config.n_users));
  }
  return bb;
}

namespace {

// Shared data of the phase-shift oracle.
struct VOracleData {
  std::vector<CMat> c;                       // index n * n_grid + psi: R x K
  RMat ref;                                  // Npsi x Nc
  std::vector<CMat> pen_a;                   // index n * K + k: R x K, column i = a_{i,n}
  std::vector<Eigen::RowVectorXcd> pen_b;    // same index: 1 x K
  RMat gamma;
  double sigma2 = 0.0;
  double rho = 0.0;
  int n_sc = 0;
  int n_grid = 0;
  int n_users = 0;
};

std::shared_ptr<VOracleData> make_v_data(const ChannelSet& ch, const std::vector<CMat>& w_blocks,
                                         const RMat& ref_bp, const ScenarioConfig& config,
                                         double rho_sinr) {
  auto data = std::make_shared<VOracleData>();
  data->ref = ref_bp;
  data->gamma = config.sinr_threshold;
  data->sigma2 = config.noise_var_w;
  data->rho = rho_sinr;
  data->n_sc = config.n_sc;
  data->n_grid = config.n_grid();
  data->n_users = config.n_users;

  data->c.resize(static_cast<std::size_t>(config.n_sc) * config.n_grid());
  std::vector<CVec> steer(config.n_grid());
  for (int g = 0; g < config.n_grid(); ++g) {
    steer[g] = ris_steering(config.angle_grid_deg[g], config.n_ris);
  }
  for (int n = 0; n < config.n_sc; ++n) {
    const CMat projected = ch.h_bs_ris[n].adjoint() * w_blocks[n];  // R x K
    for (int g = 0; g < config.n_grid(); ++g) {
      // C_{psi,n} = diag(a_hat^H) H_br^H W_n
      data->c[static_cast<std::size_t>(n) * config.n_grid() + g] =
          steer[g].conjugate().asDiagonal() * projected;
    }
  }
  if (rho_sinr > 0.0) {
    data->pen_a.resize(static_cast<std::size_t>(config.n_sc) * config.n_users);
    data->pen_b.resize(data->pen_a.size());
    for (int n = 0; n < config.n_sc; ++n) {
      const CMat projected = ch.h_bs_ris[n].adjoint() * w_blocks[n];  // R x K
      for (int k = 0; k < config.n_users; ++k) {
        const std::size_t idx = static_cast<std::size_t>(n) * config.n_users + k;
        // a_{i,n} = diag(h_ru,k^H) H_br^H w_i; b_{i,n} = h_bu,k^H w_i.
        data->pen_a[idx] = ch.h_ris_ue[n].col(k).conjugate().asDiagonal() * projected;
        data->pen_b[idx] = ch.h_bs_ue[n].col(k).adjoint() * w_blocks[n];
      }
    }
  }
  return data;
}

double v_cost(const VOracleData& d, const CMat& v) {
  double acc = 0.0;
  for (int n = 0; n < d.n_sc; ++n) {
    for (int g = 0; g < d.n_grid; ++g) {
      const CMat& c = d.c[static_cast<std::size_t>(n) * d.n_grid + g];
      const double e = (c.adjoint() * v).squaredNorm() - d.ref(g, n);
      acc += e * e;
    }
  }
  if (d.rho > 0.0) {
    for (int n = 0; n < d.n_sc; ++n) {
      for (int k = 0; k < d.n_users; ++k) {
        const std::size_t idx = static_cast<std::size_t>(n) * d.n_users + k;
        const Eigen::RowVectorXcd u = d.pen_b[idx] + (v.adjoint() * d.pen_a[idx]);
        const double g = d.gamma(k, n);
        const double margin =
            (1.0 + g) * std::norm(u(k)) - g * u.squaredNorm() - d.sigma2 * g;
        if (margin < 0.0) acc += d.rho * margin * margin;
      }
    }
  }
  if (!std::isfinite(acc)) throw std::domain_error("cost_grad_v: non-finite cost");
  return acc;
}

CMat v_grad(const VOracleData& d, const CMat& v) {
  CMat g = CMat::Zero(v.rows(), 1);
  for (int n = 0; n < d.n_sc; ++n) {
    for (int gi = 0; gi < d.n_grid; ++gi) {
      const CMat& c = d.c[static_cast<std::size_t>(n) * d.n_grid + gi];
      const CVec t = c.adjoint() * v;
      const double e = t.squaredNorm() - d.ref(gi, n);
      g += (4.0 * e) * (c * t);
    }
  }
  if (d.rho > 0.0) {
    for (int n = 0; n < d.n_sc; ++n) {
      for (int k = 0; k < d.n_users; ++k) {
        const std::size_t idx = static_cast<std::size_t>(n) * d.n_users + k;
        const CMat& a = d.pen_a[idx];
        const Eigen::RowVectorXcd u = d.pen_b[idx] + (v.adjoint() * a);
        const double gk = d.gamma(k, n);
        const double margin =
            (1.0 + gk) * std::norm(u(k)) - gk * u.squaredNorm() - d.sigma2 * gk;
        if (margin >= 0.0) continue;
        CVec term = (1.0 + gk) * std::conj(u(k)) * a.col(k) - gk * (a * u.adjoint());
        g += (4.0 * d.rho * margin) * term;
      }
    }
  }
  return g;
}

std::vector<CMat> diagonal_blocks(const CMat& w, int n_tx, int n_users, int n_sc) {
  std::vector<CMat> blocks(n_sc);
  for (int n = 0; n < n_sc; ++n) {
    blocks[n] = w.block(static_cast<Eigen::Index>(n) * n_tx,
                        static_cast<Eigen::Index>(n) * n_users, n_tx, n_users);
  }
  return blocks;
}

}  // namespace

CostOracle cost_grad_v(const SolverState& state, const ChannelSet& ch, const RMat& ref_bp,
                       const ScenarioConfig& config) {
  check_ref_shape(ref_bp, config);
  const auto blocks = diagonal_blocks(state.w_aux, config.n_tx, config.n_users, config.n_sc);
  return cost_grad_ris(ch, blocks, ref_bp, config, state.rho3);
}

CostOracle cost_grad_ris(const ChannelSet& ch, const std::vector<CMat>& w_blocks,
                         const RMat& ref_bp, const ScenarioConfig& config, double rho_sinr) {
  check_ref_shape(ref_bp, config);
  auto data = make_v_data(ch, w_blocks, ref_bp, config, rho_sinr);
  CostOracle oracle;
  oracle.cost = [data](const CMat& v) { return v_cost(*data, v); };
  oracle.grad = [data](const CMat& v) { return v_grad(*data, v); };
  return oracle;
}

CostOracle cost_grad_digital(const ChannelSet& ch, const RisPhases& ris, const RMat& ref_bp,
                             const ScenarioConfig& config, double rho_sinr) {
  check_ref_shape(ref_bp, config);
  auto data = std::make_shared<WOracleData>();
  data->x = make_bp_rows(ch, ris, config.angle_grid_deg);
  data->h = make_combined_columns(ch, ris);
  data->ref = ref_bp;
  data->gamma = config.sinr_threshold;
  data->sigma2 = config.noise_var_w;
  data->rho2 = rho_sinr;
  data->dims = {config.n_tx, config.n_users, config.n_sc};

  CostOracle oracle;
  oracle.cost = [data](const CMat& w) {
    double acc = 0.0;
    for (int n = 0; n < data->dims.n_sc; ++n) {
      const CMat block =
          w.middleCols(static_cast<Eigen::Index>(n) * data->dims.n_users, data->dims.n_users);
      acc += bp_cost_block(data->x[n], data->ref, n, block);
      if (data->rho2 > 0.0) {
        acc += pen_cost_block(data->h[n], data->gamma, data->sigma2, n, block, data->rho2);
      }
    }
    if (!std::isfinite(acc)) throw std::domain_error("cost_grad_digital: non-finite cost");
    return acc;
  };
  oracle.grad = [data](const CMat& w) {
    CMat g = CMat::Zero(w.rows(), w.cols());
    for (int n = 0; n < data->dims.n_sc; ++n) {
      const Eigen::Index c0 = static_cast<Eigen::Index>(n) * data->dims.n_users;
      const CMat block = w.middleCols(c0, data->dims.n_users);
      auto g_block = g.middleCols(c0, data->dims.n_users);
      bp_grad_block(data->x[n], data->ref, n, block, g_block);
      if (data->rho2 > 0.0) {
        pen_grad_block(data->h[n], data->gamma, data->sigma2, n, block, data->rho2, g_block);
      }
    }
    return g;
  };
  return oracle;
}

CMat dual_update(const SolverState& state) {
  return state.dual +
         state.rho1 * (state.w_aux - EffectivePrecoder::compose(state.bf).full());
}

double penalty_update(double rho) { return std::min(10.0 * rho, 1000.0); }

RcgTrace make_trace(const RcgResult& r) {
  RcgTrace t;
  t.cost_history = r.cost_history;
  t.iterations = r.iterations;
  t.final_grad_norm = r.grad_norm_history.empty() ? 0.0 : r.grad_norm_history.back();
  t.max_constraint_violation = r.max_constraint_violation;
  t.max_tangency_residual = r.max_tangency_residual;
  return t;
}

namespace {

CMat random_sphere_point(Rng& rng, Eigen::Index rows, Eigen::Index cols, double radius) {
  CMat w(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) w(i, j) = rng.cnormal();
  }
  return (radius / w.norm()) * w;
}

CMat random_circle_point(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  CMat w(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      w(i, j) = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
    }
  }
  return w;
}

}  // namespace

AdmmResult admm_solve(const ScenarioConfig& config, const ChannelSet& ch, const RMat& ref_bp,
                      std::uint64_t init_seed, const AdmmOptions& options) {
  config.validate();
  ch.validate_against(config);
  check_ref_shape(ref_bp, config);

  const double radius = std::sqrt(config.p_max_w);
  const Eigen::Index full_rows = static_cast<Eigen::Index>(config.n_sc) * config.n_tx;
  const Eigen::Index full_cols = static_cast<Eigen::Index>(config.n_sc) * config.n_users;

  Rng rng(derive_seed(init_seed, 0));
  AdmmResult out;
  SolverState& st = out.state;
  st.w_aux = random_sphere_point(rng, full_rows, full_cols, radius);
  st.bf.rf = random_circle_point(rng, config.n_tx, config.n_rf);
  st.ris = options.initial_ris ? *options.initial_ris
                               : RisPhases(random_circle_point(rng, config.n_ris, 1));
  st.dual = CMat::Zero(full_rows, full_cols);
  st.rho1 = st.rho2 = st.rho3 = 0.1;
  st.bf.bb = update_wbb(st, config);

  const ManifoldSpec sphere = ManifoldSpec::power_sphere(radius, full_rows, full_cols);
  const ManifoldSpec circle_rf = ManifoldSpec::complex_circle(config.n_tx, config.n_rf);
  const ManifoldSpec circle_v = ManifoldSpec::complex_circle(config.n_ris, 1);

  int consecutive_flat = 0;
  double prev_objective = -1.0;
  double best_feasibility = -1.0;
  double best_objective = 0.0;
  SolverState best = st;
  for (int t = 0; t < config.admm_max_iters; ++t) {
    AdmmIterRecord rec;

    const RcgResult w_res =
        rcg_minimize(cost_grad_w(st, ch, ref_bp, config), sphere, st.w_aux, config.rcg);
    st.w_aux = w_res.point;
    rec.w_trace = make_trace(w_res);

    const RcgResult rf_res =
        rcg_minimize(cost_grad_wrf(st, config), circle_rf, st.bf.rf, config.rcg);
    st.bf.rf = rf_res.point;
    rec.rf_trace = make_trace(rf_res);

    st.bf.bb = update_wbb(st, config);

    if (options.optimize_ris) {
      const RcgResult v_res =
          rcg_minimize(cost_grad_v(st, ch, ref_bp, config), circle_v, st.ris.v(), config.rcg);
      st.ris = RisPhases(v_res.point);
      rec.v_trace = make_trace(v_res);
    }

    st.dual = dual_update(st);
    st.rho1 = penalty_update(st.rho1);
    st.rho2 = penalty_update(st.rho2);
    st.rho3 = penalty_update(st.rho3);

    const EffectivePrecoder composed = EffectivePrecoder::compose(st.bf);
    rec.primal_residual = (st.w_aux - composed.full()).norm();
    rec.objective =
        beampattern_mse(beampattern_table(ch, st.ris, composed, config.angle_grid_deg), ref_bp)
            .linear;
    rec.feasibility =
        feasibility_ratio(all_sinrs(ch, st.ris, composed, config.noise_var_w),
                          config.sinr_threshold);
    st.iter = t + 1;
    out.iterations = t + 1;
    if (rec.feasibility > best_feasibility ||
        (rec.feasibility == best_feasibility && rec.objective < best_objective)) {
      best_feasibility = rec.feasibility;
      best_objective = rec.objective;
      best = st;
      out.best_iteration = t + 1;
    }
    out.history.push_back(std::move(rec));

    if (prev_objective >= 0.0) {
      const double change = std::abs(out.history.back().objective - prev_objective) /
                            std::max(prev_objective, 1e-12);
      consecutive_flat = (change <= options.obj_rel_tol) ? consecutive_flat + 1 : 0;
    }
    prev_objective = out.history.back().objective;

    if (out.history.back().primal_residual <= config.admm_tol_rel * st.w_aux.norm() &&
        consecutive_flat >= options.obj_window) {
      out.converged = true;
      break;
    }
  }
  out.state = std::move(best);
  return out;
}

}  // namespace jcas
