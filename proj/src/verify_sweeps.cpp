// Sweep-based claims: the functional-vs-energy error bound, the max-min
// gap experiment, and the fixed-point proximity diagnostics.

#include <algorithm>
#include <cmath>

#include "dflab/solvers.hpp"
#include "dflab/verify.hpp"
#include "verify_internal.hpp"

namespace dflab {

using namespace detail;
using nlohmann::json;

namespace {

RetractOptions tight_retract(const PhysParams& p, int dim = 128) {
  RetractOptions r;
  double floor = dim > 128 ? 2e-14 : 1e-14;
  r.tol_fixed = floor * p.c * p.c * double(p.q);
  r.max_iter = 800;
  return r;
}

// |E(gamma) - calE(gamma)| via the retraction, plus the ingredients of the
// two bound shapes for one (g, gamma) pair.
struct ErrorPoint {
  double lhs = 0.0;
  double dx = 0.0;         // ||g - gamma||_X
  double dy = 0.0;         // ||g - gamma||_Y
  double comm = 0.0;       // c ||[W_{g-gamma}, beta]||
  double kappa_d = 0.0;    // measured coupling of gamma's mean field
  double lambda0_d = 0.0;  // gap(D_gamma) / c^2
  double ratio_obs = 0.0;  // measured contraction along the retraction
  bool in_ur = true;
};

ErrorPoint error_point(const SeaPair& pair, const ModelSpace& m,
                       const PhysParams& p, double radius) {
  ErrorPoint ep;
  auto [e_theta, tr] = df_energy(pair.gamma, m, p, tight_retract(p));
  ep.lhs = std::abs(e_theta - energy(pair.gamma, m, p));
  Mat diff = pair.g.mat() - pair.gamma.mat();
  ep.dx = x_norm(diff, m);
  ep.dy = y_norm(diff, m);
  ep.comm = p.c * beta_commutator(diff, m).second;
  ep.kappa_d = kappa_disc(pair.gamma, m, p);
  MeanField mf = mean_field(pair.gamma, m, p);
  ep.lambda0_d = mf.gap / (p.c * p.c);
  ep.ratio_obs = std::min(0.99, tr.ratio_obs);
  ep.in_ur = ur_certificate(pair.gamma, m, p, radius).member;
  return ep;
}

// Theory-shaped right-hand side with measured model quantities in place of
// the continuum constants (one overall scalar is calibrated separately).
double shape_x(const ErrorPoint& ep, const PhysParams& p, double radius) {
  double omk = std::max(1e-3, 1.0 - ep.kappa_d);
  double oml = 1.0 - ep.ratio_obs;
  double ac = p.alpha_c();
  return (radius + p.q) / (std::pow(omk, 4) * std::pow(ep.lambda0_d, 2.5) *
                           oml * oml) *
         ac * ac / (p.c * p.c) * ep.dx * ep.dx;
}

double shape_y(const ErrorPoint& ep, const PhysParams& p, double radius) {
  double omk = std::max(1e-3, 1.0 - ep.kappa_d);
  double oml = 1.0 - ep.ratio_obs;
  double bracket = 32.0 * ep.dy + ep.comm;
  return (radius + p.q) / (std::pow(omk, 4) * std::pow(ep.lambda0_d, 4.5) *
                           oml * oml) *
         p.alpha * p.alpha / std::pow(p.c, 4) * bracket * bracket;
}

}  // namespace

ClaimResult check_error_bound(const VerifyContext& ctx) {
  ClaimResult res;
  res.claim_id = "error_bound";
  SolveOptions so = ctx.cfg.solver;
  CsvTable csv;
  csv.header = "sweep,value,lhs,dx,dy,comm,rhs_x,ratio_x,norm_y,in_ur";

  // Exactness when g = gamma: the DF minimizer is its own fixed point.
  PhysParams pb = ctx.cfg.phys;
  ModelSpace m0 = build_model(ctx.cfg.model, pb);
  SolveReport df = solve_df(m0, pb, so);
  auto [e_min, tr_min] =
      df_energy(df.gamma, m0, pb, tight_retract(pb, m0.dim));
  double exact_defect = std::abs(e_min - df.energy);

  // alpha = 0: the compression is the same linear projector on both sides,
  // so the retraction is a strict no-op.
  PhysParams p0 = pb;
  p0.alpha = 0.0;
  SeaPair zp = random_sea_pair(m0, p0, ctx.seed ^ 0xa0ULL);
  auto [e_z, tr_z] = df_energy(zp.gamma, m0, p0, tight_retract(p0, m0.dim));
  double zero_defect = std::abs(e_z - energy(zp.gamma, m0, p0));

  // Fixed bench for the sweeps: compact box so the mean-field couplings of
  // the seeded pairs stay far above the 1e-12 c^2 floor.
  ModelConfig mc = ctx.cfg.model;
  mc.backend = Backend::dirac1d;
  mc.box_len = 14.0;
  PhysParams base;
  base.alpha = 0.4;
  base.c = 8.0;
  base.Z = 2.0;
  base.q = 2;

  // X-version sweeps with seeded random pairs (coordinate-space draws are
  // identical at every sweep point).
  std::vector<double> alphas = {0.4, 0.2, 0.1, 0.05};
  std::vector<double> cs = {5.0, 10.0, 20.0, 40.0};
  const std::uint64_t pair_seed = ctx.seed ^ 0xe77bULL;

  struct Row {
    PhysParams p;
    ErrorPoint ep;
    double radius;
  };
  std::vector<Row> rows_a, rows_c;
  for (double a : alphas) {
    PhysParams p = base;
    p.alpha = a;
    ModelSpace m = build_model(mc, p);
    double radius = default_retraction_radius(m, p);
    SeaPair pair = random_sea_pair(m, p, pair_seed);
    rows_a.push_back({p, error_point(pair, m, p, radius), radius});
  }
  for (double c : cs) {
    PhysParams p = base;
    p.c = c;
    ModelSpace m = build_model(mc, p);
    double radius = default_retraction_radius(m, p);
    SeaPair pair = random_sea_pair(m, p, pair_seed);
    rows_c.push_back({p, error_point(pair, m, p, radius), radius});
  }

  // One scalar in front of the theory-shaped right-hand side, calibrated at
  // the two sweep corners; the shape itself carries the parameter
  // dependence across both sweeps.
  double c_hat_x = 0.0;
  {
    double s1 = shape_x(rows_a.front().ep, rows_a.front().p,
                        rows_a.front().radius);
    double s2 = shape_x(rows_c.back().ep, rows_c.back().p,
                        rows_c.back().radius);
    if (s1 > 0.0) c_hat_x = std::max(c_hat_x, rows_a.front().ep.lhs / s1);
    if (s2 > 0.0) c_hat_x = std::max(c_hat_x, rows_c.back().ep.lhs / s2);
    c_hat_x *= 1.25;
  }

  bool bound_ok = true, ur_ok = true;
  std::vector<double> lhs_a, lhs_c, floors_a, floors_c;
  auto emit = [&](const std::string& sweep, double value, const Row& r,
                  std::vector<double>& lhs, std::vector<double>& floors) {
    double rhs_x = c_hat_x * shape_x(r.ep, r.p, r.radius);
    if (r.ep.lhs > rhs_x) bound_ok = false;
    if (!r.ep.in_ur) ur_ok = false;
    lhs.push_back(r.ep.lhs);
    floors.push_back(1e-12 * r.p.c * r.p.c);
    csv.rows.push_back(sweep + "," + num(value) + "," + num(r.ep.lhs) + "," +
                       num(r.ep.dx) + "," + num(r.ep.dy) + "," +
                       num(r.ep.comm) + "," + num(rhs_x) + "," +
                       num(rhs_x > 0 ? r.ep.lhs / rhs_x : 0.0) + ",," +
                       (r.ep.in_ur ? "1" : "0"));
  };
  for (size_t i = 0; i < alphas.size(); ++i)
    emit("alpha", alphas[i], rows_a[i], lhs_a, floors_a);
  for (size_t i = 0; i < cs.size(); ++i)
    emit("c", cs[i], rows_c[i], lhs_c, floors_c);
  SlopeFit fit_a = censored_fit(alphas, lhs_a, floors_a);
  SlopeFit fit_c = censored_fit(cs, lhs_c, floors_c);

  // Y-version along c with physically structured pairs (excited sea, ep-HF
  // minimizer): the commutator term stays bounded and the normalized error
  // falls like c^-4.
  std::vector<double> norm_y, floors_y, lhs_y;
  for (double c : cs) {
    PhysParams p = base;
    p.alpha = 0.2;
    p.c = c;
    ModelSpace m = build_model(mc, p);
    double radius = default_retraction_radius(m, p);
    SeaPair pair = excited_sea_pair(m, p, 1, so);
    ErrorPoint ep = error_point(pair, m, p, radius);
    double bracket = 32.0 * ep.dy + ep.comm;
    lhs_y.push_back(ep.lhs);
    norm_y.push_back(bracket > 0.0 ? ep.lhs / (bracket * bracket) : 0.0);
    floors_y.push_back(1e-12 * c * c);
    if (!ep.in_ur) ur_ok = false;
    csv.rows.push_back("y_c," + num(c) + "," + num(ep.lhs) + "," +
                       num(ep.dx) + "," + num(ep.dy) + "," + num(ep.comm) +
                       ",,," + num(norm_y.back()) + "," +
                       (ep.in_ur ? "1" : "0"));
  }
  // Censor on the raw LHS floor, then fit the normalized values.
  std::vector<double> cs_y, ny;
  int y_censored = 0;
  for (size_t i = 0; i < cs.size(); ++i) {
    if (lhs_y[i] > floors_y[i]) {
      cs_y.push_back(cs[i]);
      ny.push_back(norm_y[i]);
    } else {
      ++y_censored;
    }
  }
  SlopeFit fit_y = fit_loglog(cs_y, ny, 0.0);
  fit_y.n_censored += y_censored;

  // Exact operator-algebra identities used by the section-5 proofs.
  double ident_max = 0.0;
  {
    PhysParams p = base;
    ModelSpace m = build_model(ctx.cfg.model, p);
    Rng rng(ctx.seed ^ 0x1dULL);
    for (int s = 0; s < 10; ++s) {
      SeaPair pair = random_sea_pair(m, p, rng.fork());
      MeanField mfg = mean_field(pair.gamma, m, p);
      const Mat& gmat = pair.gamma.mat();
      Mat dpm = pair.p_plus_g - mfg.p_plus;
      Mat lhs1 = mfg.p_minus * gmat * mfg.p_minus;
      Mat rhs1 = mfg.p_minus * dpm * gmat * dpm * mfg.p_minus;
      Mat lhs2 =
          mfg.p_plus * gmat * mfg.p_plus - gmat;  // T(gamma) - gamma
      Mat rhs2 = (mfg.p_plus - pair.p_plus_g) * gmat * mfg.p_plus +
                 pair.p_plus_g * gmat * (mfg.p_plus - pair.p_plus_g);
      double scale = std::max(1.0, op_norm_hermitian(gmat));
      ident_max = std::max(
          {ident_max, op_norm(lhs1 - rhs1) / scale,
           op_norm(lhs2 - rhs2) / scale});
    }
  }

  res.measured = json{{"exact_defect_g_eq_gamma", exact_defect},
                      {"zero_alpha_defect", zero_defect},
                      {"alpha_slope", fit_a.slope},
                      {"alpha_r2", fit_a.r2},
                      {"c_slope_x", fit_c.slope},
                      {"c_r2_x", fit_c.r2},
                      {"c_slope_y_normalized", fit_y.slope},
                      {"c_r2_y", fit_y.r2},
                      {"censored", json{{"alpha", fit_a.n_censored},
                                        {"c", fit_c.n_censored},
                                        {"y", fit_y.n_censored}}},
                      {"bound_with_calibrated_const_ok", bound_ok},
                      {"identities_defect", ident_max},
                      {"all_in_ur", ur_ok}};
  res.expected = json{{"exactness", "LHS ~ 0 when g = gamma and at alpha=0"},
                      {"alpha_slope", "2 +- 0.5"},
                      {"c_slope_x", "-2 +- 0.5"},
                      {"c_slope_y_normalized", "-4 +- 0.7"},
                      {"identities", "<= 1e-12"},
                      {"r2", ">= 0.9"}};
  res.tolerance = json{{"exactness", 1e-9}};
  res.pass = exact_defect <= 1e-9 && zero_defect <= 1e-12 && bound_ok &&
             ur_ok && fit_a.ok && std::abs(fit_a.slope - 2.0) <= 0.5 &&
             fit_a.r2 >= 0.9 && fit_c.ok &&
             std::abs(fit_c.slope + 2.0) <= 0.5 && fit_c.r2 >= 0.9 &&
             fit_y.ok && std::abs(fit_y.slope + 4.0) <= 0.7 &&
             fit_y.r2 >= 0.9 && ident_max <= 1e-12;
  res.artifacts.emplace_back("error_bound", csv.str());
  return res;
}

ClaimResult check_mittleman_gap(const VerifyContext& ctx) {
  ClaimResult res;
  res.claim_id = "mittleman_gap";

  // Pinned experiment: dirac1d, q = 2, Z = 2, N = 128.
  ModelConfig mc = ctx.cfg.model;
  mc.backend = Backend::dirac1d;
  mc.n_grid = 128;
  PhysParams base = ctx.cfg.phys;
  base.Z = 2.0;
  base.q = 2;
  base.alpha = 0.05;
  SolveOptions so = ctx.cfg.solver;

  std::vector<double> cs = {10.0, 20.0, 40.0, 80.0, 160.0};
  std::vector<double> alphas = {0.0125, 0.025, 0.05, 0.1};
  const double c_fixed = 40.0;

  CsvTable csv;
  csv.header =
      "sweep,value,alpha,c,E_q,e_ephf_df_sea,e_mittleman,delta,floor,"
      "censored,free_sea_gap,bare_sea_gap";

  bool ordering_ok = true;
  std::vector<double> deltas_c, floors_c, deltas_a, floors_a;
  std::vector<double> bare_c, bare_a, free_c;

  auto run_point = [&](const PhysParams& p, const std::string& sweep,
                       double value, std::vector<double>& deltas,
                       std::vector<double>& floors,
                       std::vector<double>* bare_out,
                       std::vector<double>* free_out) {
    ModelSpace m = build_model(mc, p);
    SolveOptions pt = so;
    pt.sea_start = SeaStart::df_minimizer;
    MittlemanResult mr = mittleman(m, p, pt);
    double e_q = mr.df.energy;
    double e_sea = mr.trajectory.front().e;  // ep-HF in the gamma* sea
    double e_est = mr.e_q_estimate;
    double delta = e_q - e_sea;
    double floor = 1e-12 * p.c * p.c;
    double tol10 = 10.0 * pt.tol;
    if (!(e_sea <= e_est + tol10 && e_est <= e_q + tol10))
      ordering_ok = false;
    // Complementary diagnostics with seas that genuinely differ from the
    // self-consistent one: the free sea (off by the full external
    // potential) and the bare-potential sea (off by the mean field only,
    // which isolates the alpha^2/c^4 mechanism).
    auto [lp, lm] = free_projectors(m);
    SolveReport ep_free = solve_ephf(lp, lm, m, p, pt, 0.0);
    double free_gap = e_q - ep_free.energy;
    MeanField mf0 =
        mean_field(DensityMatrix(Mat::Zero(m.dim, m.dim)), m, p);
    SolveReport ep_bare =
        solve_ephf(mf0.p_plus, mf0.p_minus, m, p, pt, 0.0);
    double bare_gap = e_q - ep_bare.energy;
    bool censored = !(delta > floor);
    deltas.push_back(delta);
    floors.push_back(floor);
    if (bare_out) bare_out->push_back(bare_gap);
    if (free_out) free_out->push_back(free_gap);
    csv.rows.push_back(sweep + "," + num(value) + "," + num(p.alpha) + "," +
                       num(p.c) + "," + num(e_q) + "," + num(e_sea) + "," +
                       num(e_est) + "," + num(delta) + "," + num(floor) +
                       "," + (censored ? "1" : "0") + "," + num(free_gap) +
                       "," + num(bare_gap));
  };

  for (double c : cs) {
    PhysParams p = base;
    p.c = c;
    run_point(p, "c", c, deltas_c, floors_c, &bare_c, &free_c);
  }
  for (double a : alphas) {
    PhysParams p = base;
    p.c = c_fixed;
    p.alpha = a;
    run_point(p, "alpha", a, deltas_a, floors_a, &bare_a, nullptr);
  }

  SlopeFit fit_c = censored_fit(cs, deltas_c, floors_c);
  SlopeFit fit_a = censored_fit(alphas, deltas_a, floors_a);
  SlopeFit fit_bare_c = fit_loglog(cs, bare_c, 0.0);
  SlopeFit fit_bare_a = fit_loglog(alphas, bare_a, 0.0);
  SlopeFit fit_free_c = fit_loglog(cs, free_c, 0.0);

  std::string note;
  if (!fit_c.ok || !fit_a.ok)
    note =
        "slope fit impossible: delta = E_q - e^(gamma* sea) sits at the "
        "numerical floor on too many points (fewer than 4 usable). For a "
        "filled nondegenerate shell the DF minimizer is itself the ep-HF "
        "minimizer of its own sea, so this delta vanishes identically; "
        "the bare-potential-sea gap reported alongside resolves the "
        "alpha^2/c^4 law.";

  res.measured = json{{"c_values", cs},
                      {"alpha_values", alphas},
                      {"delta_c", deltas_c},
                      {"delta_alpha", deltas_a},
                      {"ordering_ok", ordering_ok},
                      {"c_slope", fit_c.slope},
                      {"c_r2", fit_c.r2},
                      {"c_points_used", fit_c.n_used},
                      {"c_points_censored", fit_c.n_censored},
                      {"alpha_slope", fit_a.slope},
                      {"alpha_r2", fit_a.r2},
                      {"alpha_points_used", fit_a.n_used},
                      {"alpha_points_censored", fit_a.n_censored},
                      {"bare_sea_gap_c_slope", fit_bare_c.slope},
                      {"bare_sea_gap_c_r2", fit_bare_c.r2},
                      {"bare_sea_gap_alpha_slope", fit_bare_a.slope},
                      {"bare_sea_gap_alpha_r2", fit_bare_a.r2},
                      {"free_sea_gap_c_slope", fit_free_c.slope}};
  res.expected = json{{"ordering", "e^(g*) <= e_est <= E_q within 10 tol"},
                      {"c_slope", "-4 +- 0.7, r2 >= 0.9"},
                      {"alpha_slope", "2 +- 0.3, r2 >= 0.9"},
                      {"floor", "1e-12 c^2"}};
  res.tolerance = json{{"ordering", "10 x solver tol"}};
  res.note = note;
  res.pass = ordering_ok && fit_c.ok && fit_a.ok &&
             std::abs(fit_c.slope + 4.0) <= 0.7 && fit_c.r2 >= 0.9 &&
             std::abs(fit_a.slope - 2.0) <= 0.3 && fit_a.r2 >= 0.9;
  res.artifacts.emplace_back("mittleman_gap", csv.str());
  return res;
}


ClaimResult check_fixed_point_proximity(const VerifyContext& ctx) {
  ClaimResult res;
  res.claim_id = "fixed_point_proximity";
  SolveOptions so = ctx.cfg.solver;
  CsvTable csv;
  csv.header =
      "sweep,value,t_minus_g_xc,p_minus_xc,theta_t_plus,theta_t_minus,"
      "ratio_plus_norm,ratio_minus_norm";

  // Exact decomposition identities on fresh draws at the run's own model.
  PhysParams pb = ctx.cfg.phys;
  ModelSpace m0 = build_model(ctx.cfg.model, pb);
  double ident_max = 0.0;
  {
    Rng rng(ctx.seed ^ 0x55ULL);
    for (int s = 0; s < 10; ++s) {
      SeaPair pair = random_sea_pair(m0, pb, rng.fork());
      MeanField mfg = mean_field(pair.gamma, m0, pb);
      const Mat& gmat = pair.gamma.mat();
      Mat dpm = pair.p_plus_g - mfg.p_plus;
      Mat lhs1 = mfg.p_minus * gmat * mfg.p_minus;
      Mat rhs1 = mfg.p_minus * dpm * gmat * dpm * mfg.p_minus;
      Mat lhs2 = mfg.p_plus * gmat * mfg.p_plus - gmat;
      Mat rhs2 = (mfg.p_plus - pair.p_plus_g) * gmat * mfg.p_plus +
                 pair.p_plus_g * gmat * (mfg.p_plus - pair.p_plus_g);
      double scale = std::max(1.0, op_norm_hermitian(gmat));
      ident_max = std::max({ident_max, op_norm(lhs1 - rhs1) / scale,
                            op_norm(lhs2 - rhs2) / scale});
    }
  }

  // Compact bench for every quantitative sweep (couplings large enough
  // that the measured quantities clear their numerical floors).
  ModelConfig mc = ctx.cfg.model;
  mc.backend = Backend::dirac1d;
  mc.box_len = 14.0;
  PhysParams base;
  base.alpha = 0.2;
  base.c = 8.0;
  base.Z = 2.0;
  base.q = 2;
  ModelSpace mb = build_model(mc, base);

  struct ShapeVals {
    double t_res, pgp, dx, dy, comm, bracket, kd, l0d, pp_half;
  };
  auto shapes = [&](const SeaPair& pair, const ModelSpace& m,
                    const PhysParams& p) {
    ShapeVals v{};
    MeanField mfg = mean_field(pair.gamma, m, p);
    Mat tdiff =
        mfg.p_plus * pair.gamma.mat() * mfg.p_plus - pair.gamma.mat();
    v.t_res = xc_norm(tdiff, m);
    v.pgp = xc_norm(mfg.p_minus * pair.gamma.mat() * mfg.p_minus, m);
    Mat diff = pair.g.mat() - pair.gamma.mat();
    v.dx = x_norm(diff, m);
    v.dy = y_norm(diff, m);
    v.comm = p.c * beta_commutator(diff, m).second;
    v.bracket = 32.0 * v.dy + v.comm;
    v.kd = std::min(0.999, kappa_disc(pair.gamma, m, p));
    v.l0d = mfg.gap / (p.c * p.c);
    v.pp_half = op_norm(m.sqrt_abs_d * (mfg.p_plus - pair.p_plus_g));
    return v;
  };

  // Shape constants for the T-residual and sea-block bounds (X and Y
  // versions, and the refined projector-difference form), calibrated on
  // excited-sea pairs and asserted on a fresh one.
  double c67 = 0.0, c_pgp = 0.0, c67y = 0.0, c_pgp_y = 0.0, c55 = 0.0;
  double radius = default_retraction_radius(mb, base);
  for (int k0 : {1, 2}) {
    SeaPair pair = excited_sea_pair(mb, base, k0, so);
    ShapeVals v = shapes(pair, mb, base);
    double ac = base.alpha_c();
    double omk = 1.0 - v.kd;
    if (v.dx > 0.0) {
      c67 = std::max(c67, 1.25 * v.t_res * omk * std::sqrt(v.l0d) /
                              (radius * base.alpha * v.dx));
      c_pgp = std::max(c_pgp, 1.25 * v.pgp * omk * omk * v.l0d /
                                  (base.q * ac * ac * v.dx * v.dx));
    }
    if (v.bracket > 0.0) {
      c67y = std::max(c67y, 1.25 * v.t_res * omk * std::pow(v.l0d, 1.5) /
                                (ac * radius * v.bracket));
      c_pgp_y = std::max(
          c_pgp_y, 1.25 * v.pgp * omk * omk * std::pow(v.l0d, 3.0) * 2.0 *
                       base.c * base.c /
                       (ac * ac * base.q * v.bracket * v.bracket));
      c55 = std::max(c55, 1.25 * v.pp_half * 2.0 * base.c *
                              std::sqrt(omk) * std::pow(v.l0d, 1.5) /
                              (ac * v.bracket));
    }
  }
  bool shape_ok = true;
  {
    SeaPair pair = excited_sea_pair(mb, base, 3, so);
    ShapeVals v = shapes(pair, mb, base);
    double ac = base.alpha_c();
    double omk = 1.0 - v.kd;
    if (v.t_res >
        c67 * radius * base.alpha * v.dx / (omk * std::sqrt(v.l0d)))
      shape_ok = false;
    if (v.pgp > c_pgp * base.q * ac * ac * v.dx * v.dx / (omk * omk * v.l0d))
      shape_ok = false;
    if (v.t_res >
        c67y * ac * radius * v.bracket / (omk * std::pow(v.l0d, 1.5)))
      shape_ok = false;
    if (v.pgp > c_pgp_y * ac * ac * base.q * v.bracket * v.bracket /
                    (omk * omk * std::pow(v.l0d, 3.0) * 2.0 * base.c *
                     base.c))
      shape_ok = false;
    if (v.pp_half > c55 * ac * v.bracket /
                        (2.0 * base.c * std::sqrt(omk) *
                         std::pow(v.l0d, 1.5)))
      shape_ok = false;
  }

  // Sea-block compression falls quadratically in alpha (random pairs,
  // fixed coordinate draws).
  std::vector<double> alphas = {0.4, 0.2, 0.1, 0.05};
  std::vector<double> pgp_a, floors_a;
  const std::uint64_t pair_seed = ctx.seed ^ 0x5eedULL;
  for (double a : alphas) {
    PhysParams p = base;
    p.alpha = a;
    SeaPair pair = random_sea_pair(mb, p, pair_seed);
    MeanField mfg = mean_field(pair.gamma, mb, p);
    pgp_a.push_back(
        xc_norm(mfg.p_minus * pair.gamma.mat() * mfg.p_minus, mb));
    floors_a.push_back(1e-12 * p.c * p.c);
    csv.rows.push_back("pgp_alpha," + num(a) + ",," + num(pgp_a.back()) +
                       ",,,,");
  }
  SlopeFit fit_pgp_a = censored_fit(alphas, pgp_a, floors_a);

  // Second-order closeness of the fixed point to one T step: the
  // shape-normalized ratios theta/T-residual^2 follow alpha_c^2/c^2. The
  // retraction truncation sets the numerator floor; censored points are
  // excluded and reported.
  auto theta_point = [&](const PhysParams& p, const ModelSpace& m,
                         double& rp, double& rm, bool& p_ok, bool& m_ok) {
    SeaPair pair = excited_sea_pair(m, p, 1, so);
    MeanField mfg = mean_field(pair.gamma, m, p);
    Mat tmat = mfg.p_plus * pair.gamma.mat() * mfg.p_plus;
    double t_res = xc_norm(tmat - pair.gamma.mat(), m);
    RetractOptions ro = tight_retract(p, m.dim);
    RetractionTrace tr = retract(pair.gamma, m, p, ro);
    const Mat& th = tr.fixed_point.mat();
    double num_p = xc_norm(mfg.p_plus * (th - tmat) * mfg.p_plus, m);
    double num_m = xc_norm(mfg.p_minus * th * mfg.p_minus, m);
    double floor = 3.0 * ro.tol_fixed;
    p_ok = num_p > floor && t_res > 0.0;
    m_ok = num_m > floor && t_res > 0.0;
    // Divide out the measured prefactor shape so the fit sees the bare
    // alpha_c^2/c^2 law rather than the drift of the kappa-dependent
    // constants across the sweep.
    double kd = std::min(0.999, kappa_disc(pair.gamma, m, p));
    double l0d = mfg.gap / (p.c * p.c);
    double ratio_l = std::min(0.9, tr.ratio_obs);
    double shape = 1.0 / ((1.0 - kd) * (1.0 - kd) * std::pow(l0d, 1.5) *
                          (1.0 - ratio_l) * (1.0 - ratio_l));
    rp = num_p / (t_res * t_res * shape);
    rm = num_m / (t_res * t_res * shape);
    csv.rows.push_back("theta," + num(p.alpha) + "_" + num(p.c) + "," +
                       num(t_res) + ",," + num(num_p) + "," + num(num_m) +
                       "," + num(rp) + "," + num(rm));
  };

  std::vector<double> al2 = {0.4, 0.2828, 0.2, 0.1414};
  std::vector<double> a_used_p, ratio_p_a;
  for (double a : al2) {
    PhysParams p = base;
    p.alpha = a;
    double rp = 0, rm = 0;
    bool pok = false, mok = false;
    theta_point(p, mb, rp, rm, pok, mok);
    if (pok) {
      a_used_p.push_back(a);
      ratio_p_a.push_back(rp);
    }
  }
  SlopeFit fit_rpa = fit_loglog(a_used_p, ratio_p_a, 0.0);

  std::vector<double> cs2 = {7.0, 9.9, 14.0, 19.8};
  std::vector<double> c_used_p, ratio_p_c, c_used_m, ratio_m_c;
  int theta_censored = 0;
  for (double c : cs2) {
    PhysParams p = base;
    p.alpha = 0.55;
    p.c = c;
    ModelSpace m = build_model(mc, p);
    double rp = 0, rm = 0;
    bool pok = false, mok = false;
    theta_point(p, m, rp, rm, pok, mok);
    if (pok) {
      c_used_p.push_back(c);
      ratio_p_c.push_back(rp);
    } else {
      ++theta_censored;
    }
    if (mok) {
      c_used_m.push_back(c);
      ratio_m_c.push_back(rm);
    }
  }
  SlopeFit fit_rp = fit_loglog(c_used_p, ratio_p_c, 0.0);
  SlopeFit fit_rm = fit_loglog(c_used_m, ratio_m_c, 0.0);

  // Commutator ratio bounded in c (bounded by the smallest-c value).
  std::vector<double> dw_ratios;
  {
    Rng rng(ctx.seed ^ 0xd3ULL);
    Mat h_coord = random_hermitian(rng, mb.dim);
    for (double c : {8.0, 16.0, 32.0}) {
      PhysParams p = base;
      p.c = c;
      ModelSpace m = build_model(mc, p);
      SeaPair pair = random_sea_pair(m, p, pair_seed);
      MeanField mfg = mean_field(pair.gamma, m, p);
      Mat dg_op = mfg.d_shifted +
                  (p.c * p.c) * (Mat::Identity(m.dim, m.dim) - m.beta_mat());
      Mat wh = w_of(h_coord, m);
      double comm = op_norm(wh * dg_op - dg_op * wh);
      dw_ratios.push_back(comm / (p.c * y_norm(h_coord, m)));
    }
  }
  bool dw_bounded = true;
  for (double r : dw_ratios)
    if (r > dw_ratios.front() * 1.05) dw_bounded = false;

  std::string note;
  if (!fit_rp.ok)
    note = "theta-vs-T c-direction ratios resolvable on only " +
           std::to_string(c_used_p.size()) +
           " of 4 points (retraction-truncation floor); fit reported when "
           ">= 4 points survive";

  res.measured = json{{"identities_defect", ident_max},
                      {"calibrated_shapes_ok", shape_ok},
                      {"pgp_alpha_slope", fit_pgp_a.slope},
                      {"pgp_alpha_r2", fit_pgp_a.r2},
                      {"theta_plus_alpha_slope", fit_rpa.slope},
                      {"theta_plus_alpha_r2", fit_rpa.r2},
                      {"theta_plus_alpha_points", fit_rpa.n_used},
                      {"theta_plus_c_slope", fit_rp.slope},
                      {"theta_plus_c_fit_ok", fit_rp.ok},
                      {"theta_minus_c_slope", fit_rm.slope},
                      {"theta_minus_c_fit_ok", fit_rm.ok},
                      {"theta_c_points_censored", theta_censored},
                      {"dw_ratios_over_c", dw_ratios},
                      {"dw_bounded", dw_bounded}};
  res.expected =
      json{{"identities", "<= 1e-12"},
           {"pgp_alpha_slope", "2 +- 0.3"},
           {"theta_ratios", "alpha_c^2/c^2 scaling: alpha slope 2 +- 0.5 "
                            "(alpha_c^2 at fixed c), c slope -4 +- 0.5 "
                            "when >= 4 points resolve"},
           {"dw", "ratio bounded by the smallest-c value (x1.05)"}};
  res.tolerance = json{{"identities", 1e-12}};
  bool theta_c_ok = !fit_rp.ok || std::abs(fit_rp.slope + 4.0) <= 0.5;
  bool theta_m_ok = !fit_rm.ok || std::abs(fit_rm.slope + 4.0) <= 0.5;
  res.note = note;
  res.pass = ident_max <= 1e-12 && shape_ok && fit_pgp_a.ok &&
             std::abs(fit_pgp_a.slope - 2.0) <= 0.3 && fit_pgp_a.r2 >= 0.9 &&
             fit_rpa.ok && std::abs(fit_rpa.slope - 2.0) <= 0.5 &&
             theta_c_ok && theta_m_ok && dw_bounded;
  res.artifacts.emplace_back("fixed_point_proximity", csv.str());
  return res;
}

}  // namespace dflab
