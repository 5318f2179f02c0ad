#include "dflab/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace dflab {

namespace {

// Projector onto the q lowest positive levels of an assembled mean field,
// plus the Fermi level (shifted). Throws when fewer than q positive levels
// exist.
std::pair<Mat, double> aufbau_projector(const MeanField& mf, int q) {
  const int dim = static_cast<int>(mf.eigs_shifted.size());
  Mat p = Mat::Zero(dim, dim);
  int taken = 0;
  double nu_shifted = 0.0;
  for (int j = 0; j < dim && taken < q; ++j) {
    if (!mf.is_positive(j)) continue;
    p += mf.vecs.col(j) * mf.vecs.col(j).adjoint();
    nu_shifted = mf.eigs_shifted[j];
    ++taken;
  }
  if (taken < q)
    throw ConvergenceError("fewer than q positive mean-field levels");
  return {hermitian_part(p), nu_shifted};
}

struct FinalAnalysis {
  RVec occupations;
  double nu_shifted = 0.0;
  bool filled_shell = false;
  double filled_residual = 0.0;
  double orbital_residual_max = 0.0;
};

// Shell and orbital diagnostics against a Hermitian operator `op` (the full
// mean field for DF, the sea-compressed operator for ep-HF) whose relevant
// spectrum is shifted by -c^2.
FinalAnalysis analyze(const DensityMatrix& gamma, const Mat& op, double c2,
                      const SolveOptions& opts) {
  FinalAnalysis fa;
  const int dim = gamma.dim();
  Eigen::SelfAdjointEigenSolver<Mat> es(op);

  fa.occupations = gamma.occupations();
  // Occupation of each operator level.
  RVec level_occ(dim);
  for (int j = 0; j < dim; ++j) {
    Vec v = es.eigenvectors().col(j);
    level_occ[j] = std::real((v.adjoint() * gamma.mat() * v)(0, 0));
  }
  fa.nu_shifted = -c2;
  for (int j = 0; j < dim; ++j) {
    if (es.eigenvalues()[j] + c2 > 0.0 && level_occ[j] > opts.occ_tol)
      fa.nu_shifted = std::max(fa.nu_shifted, es.eigenvalues()[j]);
  }
  // Spectral projector 1_(0, nu] of the operator.
  Mat fill = Mat::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) {
    double s = es.eigenvalues()[j];
    if (s + c2 > 0.0 && s <= fa.nu_shifted + 1e-12 * c2)
      fill += es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint();
  }
  fa.filled_residual =
      op_norm_hermitian(hermitian_part(gamma.mat() - fill));
  bool integral = true;
  for (int j = 0; j < dim; ++j) {
    double o = fa.occupations[j];
    if (std::min(std::abs(o), std::abs(o - 1.0)) > opts.occ_tol)
      integral = false;
  }
  fa.filled_shell = integral && fa.filled_residual <= opts.filled_tol;

  // DF-equation residuals of the occupied orbitals. The occupied
  // eigenspace of gamma can be degenerate, so first diagonalize the
  // operator inside range(gamma); the residual then measures how far that
  // range is from being an invariant subspace.
  std::vector<int> occ_idx;
  for (int j = 0; j < dim; ++j)
    if (gamma.occupations()[j] > opts.occ_tol) occ_idx.push_back(j);
  if (!occ_idx.empty()) {
    const int k = static_cast<int>(occ_idx.size());
    Mat v_occ(dim, k);
    for (int i = 0; i < k; ++i)
      v_occ.col(i) = gamma.eigenvectors().col(occ_idx[i]);
    Mat op_small = hermitian_part(v_occ.adjoint() * op * v_occ);
    Eigen::SelfAdjointEigenSolver<Mat> small(op_small);
    for (int i = 0; i < k; ++i) {
      Vec u = v_occ * small.eigenvectors().col(i);
      double res = (op * u - small.eigenvalues()[i] * u).norm();
      fa.orbital_residual_max = std::max(fa.orbital_residual_max, res);
    }
  }
  return fa;
}

void stamp(SolveReport& rep, const ModelSpace& m, const PhysParams& p,
           const SolveOptions& opts, double trace_g_for_stamp) {
  double radius =
      opts.radius > 0.0 ? opts.radius : default_retraction_radius(m, p);
  rep.consts = derive_constants(p, radius);
  rep.assumption = check_assumption_1(rep.consts, p, radius);
  try {
    rep.ephf_condition_ok = check_ephf_condition(
        p, trace_g_for_stamp >= 0.0 ? trace_g_for_stamp : double(p.q));
  } catch (const DomainError&) {
    rep.ephf_condition_ok = false;
  }
}

// Eigen-clamp with a chemical shift chosen so the clamped occupations sum
// to the target trace (exact Euclidean projection onto the spectrahedron).
RVec clamp_to_trace(const RVec& vals, double lo, double hi, double target) {
  auto total = [&](double mu) {
    double s = 0.0;
    for (int i = 0; i < vals.size(); ++i)
      s += std::clamp(vals[i] - mu, lo, hi);
    return s;
  };
  double lo_mu = vals.minCoeff() - hi - 1.0;
  double hi_mu = vals.maxCoeff() - lo + 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo_mu + hi_mu);
    (total(mid) > target ? lo_mu : hi_mu) = mid;
  }
  double mu = 0.5 * (lo_mu + hi_mu);
  RVec out(vals.size());
  for (int i = 0; i < vals.size(); ++i)
    out[i] = std::clamp(vals[i] - mu, lo, hi);
  return out;
}

}  // namespace

SolveReport solve_df(const ModelSpace& m, const PhysParams& p,
                     const SolveOptions& opts) {
  p.validate();
  if (p.q > m.dim / 4)
    throw ConfigError("solve_df needs q <= dim/4");
  const double c2 = p.c * p.c;
  SolveReport rep;
  stamp(rep, m, p, opts, -1.0);
  rep.strategy_name =
      opts.strategy == DfStrategy::aufbau ? "aufbau" : "gradient";

  MeanField mf0 = mean_field(DensityMatrix(Mat::Zero(m.dim, m.dim)), m, p);
  DensityMatrix gamma(aufbau_projector(mf0, p.q).first);
  if (opts.strategy == DfStrategy::gradient && p.alpha != 0.0)
    gamma = retract(gamma, m, p, opts.retract).fixed_point;
  double e_cur = energy(gamma, m, p);
  rep.energy_history.push_back(e_cur);

  double t_init = 1.0;
  double grad_step = opts.grad_step;
  MeanField mf = mean_field(gamma, m, p);

  for (int k = 0; k < opts.max_iter; ++k) {
    auto [cand, nu_cand] = aufbau_projector(mf, p.q);
    double residual =
        op_norm_hermitian(hermitian_part(gamma.mat() - cand));
    rep.residual_history.push_back(residual);
    rep.final_residual = residual;
    rep.iterations = k;
    if (residual <= opts.tol) {
      // Resolve occupations exactly: the converged state is the Aufbau
      // projector of its own mean field (trace exactly q, orbitals exact
      // eigenvectors up to the mean-field update of order alpha*tol).
      gamma = DensityMatrix(cand);
      e_cur = energy(gamma, m, p);
      mf = mean_field(gamma, m, p);
      rep.converged = true;
      break;
    }

    // Oscillation heuristic: residual bouncing back up signals occupations
    // trading places between near-degenerate levels; shrink the mixing.
    const auto& h = rep.residual_history;
    if (h.size() >= 3 && h[h.size() - 2] < residual &&
        residual > 0.9 * h[h.size() - 3]) {
      rep.level_crossing_flag = true;
      t_init = std::max(0.0625, 0.5 * t_init);
    }

    bool accepted = false;
    if (opts.strategy == DfStrategy::aufbau) {
      double t = t_init;
      for (int trial = 0; trial < 12 && !accepted; ++trial, t *= 0.5) {
        DensityMatrix mix((1.0 - t) * gamma.mat() + t * cand);
        RetractionTrace tr = retract(mix, m, p, opts.retract);
        double e_new = energy(tr.fixed_point, m, p);
        if (e_new <= e_cur + 1e-12 * (1.0 + std::abs(e_cur))) {
          gamma = tr.fixed_point;
          e_cur = e_new;
          accepted = true;
        }
      }
    } else {
      // Projected gradient in the P+ block of the current mean field.
      std::vector<int> pos;
      for (int j = 0; j < m.dim; ++j)
        if (mf.is_positive(j)) pos.push_back(j);
      Mat q_basis(m.dim, static_cast<int>(pos.size()));
      for (size_t i = 0; i < pos.size(); ++i)
        q_basis.col(static_cast<int>(i)) = mf.vecs.col(pos[i]);

      Mat g_small = q_basis.adjoint() * gamma.mat() * q_basis;
      Mat d_small = q_basis.adjoint() * mf.d_shifted * q_basis;
      double s = grad_step;
      for (int trial = 0; trial < 20 && !accepted; ++trial, s *= 0.5) {
        Mat step = hermitian_part(g_small - s * d_small);
        Eigen::SelfAdjointEigenSolver<Mat> es(step);
        RVec occ = clamp_to_trace(es.eigenvalues(), 0.0, 1.0, double(p.q));
        Mat proj_small = es.eigenvectors() * occ.asDiagonal() *
                         es.eigenvectors().adjoint();
        DensityMatrix moved(q_basis * proj_small * q_basis.adjoint());
        RetractionTrace tr = retract(moved, m, p, opts.retract);
        double e_new = energy(tr.fixed_point, m, p);
        if (e_new <= e_cur + 1e-12 * (1.0 + std::abs(e_cur))) {
          gamma = tr.fixed_point;
          e_cur = e_new;
          grad_step = std::min(4.0, s * 2.0);
          accepted = true;
        }
      }
    }
    if (!accepted)
      throw ConvergenceError("solve_df: line search stalled at iteration " +
                             std::to_string(k));
    rep.energy_history.push_back(e_cur);
    mf = mean_field(gamma, m, p);
  }
  if (!rep.converged)
    throw ConvergenceError("solve_df: max_iter reached, residual " +
                           std::to_string(rep.final_residual));

  rep.energy = e_cur;
  rep.gamma = gamma;
  rep.trace = gamma.trace();
  FinalAnalysis fa = analyze(gamma, mf.d_shifted, c2, opts);
  rep.occupations = fa.occupations;
  rep.nu_shifted = fa.nu_shifted;
  rep.filled_shell = fa.filled_shell;
  rep.filled_shell_residual = fa.filled_residual;
  rep.orbital_residual_max = fa.orbital_residual_max;
  double radius =
      opts.radius > 0.0 ? opts.radius : default_retraction_radius(m, p);
  rep.ur = ur_certificate(gamma, m, p, radius);
  return rep;
}

SolveReport solve_ephf(const Mat& p_plus_g, const Mat& p_minus_g,
                       const ModelSpace& m, const PhysParams& p,
                       const SolveOptions& opts, double trace_g) {
  p.validate();
  const double c2 = p.c * p.c;
  SolveReport rep;
  stamp(rep, m, p, opts, trace_g);
  rep.strategy_name = opts.ephf_full_set ? "ephf-full-set" : "ephf-scf";

  Eigen::SelfAdjointEigenSolver<Mat> pes(p_plus_g);
  std::vector<int> idx;
  for (int j = 0; j < m.dim; ++j)
    if (pes.eigenvalues()[j] > 0.5) idx.push_back(j);
  const int rank = static_cast<int>(idx.size());
  if (rank < p.q) throw ConfigError("solve_ephf: rank(P+_g) < q");
  Mat qb(m.dim, rank);
  for (int i = 0; i < rank; ++i) qb.col(i) = pes.eigenvectors().col(idx[i]);

  auto compressed_fill = [&](const Mat& d_shifted) {
    Mat c_small = hermitian_part(qb.adjoint() * d_shifted * qb);
    Eigen::SelfAdjointEigenSolver<Mat> es(c_small);
    Mat fill_small = Mat::Zero(rank, rank);
    for (int j = 0; j < p.q; ++j)
      fill_small +=
          es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint();
    double nu = es.eigenvalues()[p.q - 1];
    return std::pair<Mat, double>(
        hermitian_part(qb * fill_small * qb.adjoint()), nu);
  };

  MeanField mf0 = mean_field(DensityMatrix(Mat::Zero(m.dim, m.dim)), m, p);
  DensityMatrix gamma(compressed_fill(mf0.d_shifted).first);
  double e_cur = energy(gamma, m, p);
  rep.energy_history.push_back(e_cur);

  if (!opts.ephf_full_set) {
    for (int k = 0; k < opts.max_iter; ++k) {
      MeanField mf = mean_field(gamma, m, p);
      auto [cand, nu_cand] = compressed_fill(mf.d_shifted);
      double residual =
          op_norm_hermitian(hermitian_part(gamma.mat() - cand));
      rep.residual_history.push_back(residual);
      rep.final_residual = residual;
      rep.iterations = k;
      if (residual <= opts.tol) {
        gamma = DensityMatrix(cand);  // resolve occupations exactly
        e_cur = energy(gamma, m, p);
        rep.converged = true;
        break;
      }
      bool accepted = false;
      double t = 1.0;
      for (int trial = 0; trial < 12 && !accepted; ++trial, t *= 0.5) {
        DensityMatrix mix((1.0 - t) * gamma.mat() + t * cand);
        double e_new = energy(mix, m, p);
        if (e_new <= e_cur + 1e-12 * (1.0 + std::abs(e_cur))) {
          gamma = mix;
          e_cur = e_new;
          accepted = true;
        }
      }
      if (!accepted)
        throw ConvergenceError("solve_ephf: line search stalled");
      rep.energy_history.push_back(e_cur);
    }
  } else {
    // Projected gradient over the full block set
    // {-P- <= g <= P+, P+ g P- = 0, Tr g = q}.
    Eigen::SelfAdjointEigenSolver<Mat> mes(p_minus_g);
    std::vector<int> midx;
    for (int j = 0; j < m.dim; ++j)
      if (mes.eigenvalues()[j] > 0.5) midx.push_back(j);
    const int mrank = static_cast<int>(midx.size());
    Mat qm(m.dim, mrank);
    for (int i = 0; i < mrank; ++i)
      qm.col(i) = mes.eigenvectors().col(midx[i]);

    double s = opts.grad_step;
    for (int k = 0; k < opts.max_iter; ++k) {
      MeanField mf = mean_field(gamma, m, p);
      auto project = [&](double step) {
        Mat a = hermitian_part(gamma.mat() - step * mf.d_shifted);
        Mat ap = hermitian_part(qb.adjoint() * a * qb);
        Mat am = hermitian_part(qm.adjoint() * a * qm);
        Eigen::SelfAdjointEigenSolver<Mat> ep(ap), em(am);
        RVec all(rank + mrank);
        all.head(rank) = ep.eigenvalues();
        all.tail(mrank) = em.eigenvalues();
        // One chemical potential across both blocks, electron block in
        // [0,1], positron block in [-1,0].
        auto total = [&](double mu) {
          double tot = 0.0;
          for (int i = 0; i < rank; ++i)
            tot += std::clamp(ep.eigenvalues()[i] - mu, 0.0, 1.0);
          for (int i = 0; i < mrank; ++i)
            tot += std::clamp(em.eigenvalues()[i] - mu, -1.0, 0.0);
          return tot;
        };
        double lo = all.minCoeff() - 2.0, hi = all.maxCoeff() + 2.0;
        for (int it = 0; it < 200; ++it) {
          double mid = 0.5 * (lo + hi);
          (total(mid) > double(p.q) ? lo : hi) = mid;
        }
        double mu = 0.5 * (lo + hi);
        RVec op_occ(rank), om_occ(mrank);
        for (int i = 0; i < rank; ++i)
          op_occ[i] = std::clamp(ep.eigenvalues()[i] - mu, 0.0, 1.0);
        for (int i = 0; i < mrank; ++i)
          om_occ[i] = std::clamp(em.eigenvalues()[i] - mu, -1.0, 0.0);
        Mat gp = ep.eigenvectors() * op_occ.asDiagonal() *
                 ep.eigenvectors().adjoint();
        Mat gm = em.eigenvectors() * om_occ.asDiagonal() *
                 em.eigenvectors().adjoint();
        return hermitian_part(qb * gp * qb.adjoint() +
                              qm * gm * qm.adjoint());
      };

      Mat cand = project(s);
      double residual =
          op_norm_hermitian(hermitian_part(gamma.mat() - cand)) /
          std::max(s, 1.0);
      rep.residual_history.push_back(residual);
      rep.final_residual = residual;
      rep.iterations = k;
      if (residual <= opts.tol) {
        rep.converged = true;
        break;
      }
      bool accepted = false;
      double st = s;
      for (int trial = 0; trial < 20 && !accepted; ++trial, st *= 0.5) {
        DensityMatrix cand_dm(project(st));
        double e_new = energy(cand_dm, m, p);
        if (e_new <= e_cur + 1e-12 * (1.0 + std::abs(e_cur))) {
          gamma = cand_dm;
          e_cur = e_new;
          s = std::min(4.0, st * 2.0);
          accepted = true;
        }
      }
      if (!accepted)
        throw ConvergenceError("solve_ephf (full set): gradient stalled");
      rep.energy_history.push_back(e_cur);
    }
  }
  if (!rep.converged)
    throw ConvergenceError("solve_ephf: max_iter reached, residual " +
                           std::to_string(rep.final_residual));

  rep.energy = e_cur;
  rep.gamma = gamma;
  rep.trace = gamma.trace();
  // Closed-shell analysis runs against the sea-compressed operator.
  MeanField mff = mean_field(gamma, m, p);
  Mat compressed = hermitian_part(p_plus_g * mff.d_shifted * p_plus_g);
  // Outside range(P+_g) the compressed operator vanishes; push that
  // nullspace far below the physical window so the analysis only sees the
  // electronic block.
  compressed += -3.0 * c2 * hermitian_part(p_minus_g);
  FinalAnalysis fa = analyze(gamma, compressed, c2, opts);
  rep.occupations = fa.occupations;
  rep.nu_shifted = fa.nu_shifted;
  rep.filled_shell = fa.filled_shell;
  rep.filled_shell_residual = fa.filled_residual;
  rep.orbital_residual_max = fa.orbital_residual_max;
  double elec_res =
      op_norm_hermitian(hermitian_part(
          p_plus_g * gamma.mat() * p_plus_g - gamma.mat()));
  rep.purely_electronic = elec_res <= 10.0 * opts.tol + 1e-12;
  double radius =
      opts.radius > 0.0 ? opts.radius : default_retraction_radius(m, p);
  rep.ur = ur_certificate(gamma, m, p, radius);
  return rep;
}

MittlemanResult mittleman(const ModelSpace& m, const PhysParams& p,
                          const SolveOptions& opts) {
  MittlemanResult res;
  res.df = solve_df(m, p, opts);

  DensityMatrix sea_state;
  Mat p_plus, p_minus;
  double trace_g = 0.0;
  if (opts.sea_start == SeaStart::df_minimizer) {
    sea_state = res.df.gamma;
    MeanField mf = mean_field(sea_state, m, p);
    p_plus = mf.p_plus;
    p_minus = mf.p_minus;
    trace_g = sea_state.trace();
  } else {
    auto [lp, lm] = free_projectors(m);
    p_plus = lp;
    p_minus = lm;
    trace_g = 0.0;
  }

  double e_prev = 0.0;
  for (int k = 0; k < opts.max_outer; ++k) {
    SolveReport inner = solve_ephf(p_plus, p_minus, m, p, opts, trace_g);
    MittlemanStep step;
    step.k = k;
    step.e = inner.energy;
    step.trace_g = trace_g;
    step.purely_electronic = inner.purely_electronic;
    res.trajectory.push_back(step);
    res.last_ephf = inner;
    if (k > 0 && std::abs(inner.energy - e_prev) <= opts.tol) {
      res.converged = true;
      break;
    }
    e_prev = inner.energy;
    MeanField mf = mean_field(inner.gamma, m, p);
    p_plus = mf.p_plus;
    p_minus = mf.p_minus;
    trace_g = inner.gamma.trace();
  }
  res.e_q_estimate = res.trajectory.front().e;
  for (const auto& s : res.trajectory)
    res.e_q_estimate = std::max(res.e_q_estimate, s.e);
  return res;
}

std::optional<ShellSwap> shell_swap_direction(const SolveReport& rep,
                                              const ModelSpace& m,
                                              const PhysParams& p) {
  const double c2 = p.c * p.c;
  MeanField mf = mean_field(rep.gamma, m, p);
  std::vector<int> shell;
  for (int j = 0; j < m.dim; ++j) {
    if (!mf.is_positive(j)) continue;
    if (std::abs(mf.eigs_shifted[j] - rep.nu_shifted) <= 1e-8 * c2)
      shell.push_back(j);
  }
  if (shell.size() < 2) return std::nullopt;
  const int k = static_cast<int>(shell.size());
  Mat vs(m.dim, k);
  for (int i = 0; i < k; ++i) vs.col(i) = mf.vecs.col(shell[i]);
  Mat block = hermitian_part(vs.adjoint() * rep.gamma.mat() * vs);
  Eigen::SelfAdjointEigenSolver<Mat> es(block);
  ShellSwap swap;
  swap.mu_a = es.eigenvalues()[0];
  swap.mu_b = es.eigenvalues()[k - 1];
  swap.a_idx = 0;
  swap.b_idx = k - 1;
  swap.t_max = std::min(1.0 - swap.mu_a, swap.mu_b);
  if (swap.t_max <= 1e-8) return std::nullopt;
  Vec psi_a = vs * es.eigenvectors().col(0);
  Vec psi_b = vs * es.eigenvectors().col(k - 1);
  swap.h = psi_a * psi_a.adjoint() - psi_b * psi_b.adjoint();
  swap.h = hermitian_part(swap.h);
  return swap;
}

}  // namespace dflab
