#include <doctest.h>

#include <cmath>

#include "dflab/retraction.hpp"
#include "dflab/sampling.hpp"

using namespace dflab;

namespace {

ModelSpace grid_model(int n, double box, double c, double z) {
  ModelConfig cfg;
  cfg.backend = Backend::dirac1d;
  cfg.n_grid = n;
  cfg.box_len = box;
  PhysParams p{0.0, c, z, 1};
  return build_model(cfg, p);
}

// Independent oracle for P+: Newton iteration for the matrix sign function
// of the shifted operator, sign(D) = lim S_{k+1} = (S_k + S_k^{-1})/2.
Mat sign_projector(const Mat& d_full) {
  Mat s = d_full;
  for (int it = 0; it < 60; ++it) {
    Mat next = 0.5 * (s + s.inverse());
    if ((next - s).norm() <= 1e-14 * s.norm()) {
      s = next;
      break;
    }
    s = next;
  }
  return 0.5 * (Mat::Identity(d_full.rows(), d_full.cols()) + s);
}

DensityMatrix aufbau_of_linear(const ModelSpace& m, const PhysParams& p,
                               int q) {
  PhysParams lin = p;
  lin.alpha = 0.0;
  MeanField mf = mean_field(DensityMatrix(Mat::Zero(m.dim, m.dim)), m, lin);
  Mat proj = Mat::Zero(m.dim, m.dim);
  int taken = 0;
  for (int j = 0; j < m.dim && taken < q; ++j) {
    if (!mf.is_positive(j)) continue;
    proj += mf.vecs.col(j) * mf.vecs.col(j).adjoint();
    ++taken;
  }
  return DensityMatrix(proj);
}

}  // namespace

TEST_CASE("t_map equals the dense sign-function oracle") {
  ModelConfig cfg;
  cfg.backend = Backend::synthetic;
  cfg.synth_dim = 16;
  cfg.seed = 3;
  PhysParams p{0.12, 4.0, 1.0, 2};
  ModelSpace m = build_model(cfg, p);
  Rng rng(8);
  Mat g = sample_gamma_q(rng, m.dim, 2.0, 0.5);
  DensityMatrix dg(g);

  DensityMatrix t = t_map(dg, m, p);
  MeanField mf = mean_field(dg, m, p);
  Mat d_full = mf.d_shifted + (p.c * p.c) * Mat::Identity(m.dim, m.dim);
  Mat p_plus = sign_projector(d_full);
  Mat expect = p_plus * g * p_plus;
  CHECK((t.mat() - expect).norm() <= 1e-9 * (1.0 + expect.norm()));

  // T preserves Gamma_q: spectrum within [0,1], trace nonincreasing,
  // over a batch of seeded draws.
  for (int s = 0; s < 8; ++s) {
    DensityMatrix gs(sample_gamma_q(rng, m.dim, 2.0, 0.4 + 0.1 * (s % 3)));
    DensityMatrix ts = t_map(gs, m, p);
    CHECK(ts.occupations().minCoeff() >= -1e-12);
    CHECK(ts.occupations().maxCoeff() <= 1.0 + 1e-12);
    CHECK(ts.trace() <= gs.trace() + 1e-12);
  }
}

TEST_CASE("fixed point converges in one application") {
  ModelSpace m = grid_model(16, 10.0, 8.0, 1.0);
  PhysParams p{0.05, 8.0, 1.0, 2};
  // Retract an Aufbau state first, then feed the fixed point back in.
  DensityMatrix start = aufbau_of_linear(m, p, 2);
  RetractionTrace tr = retract(start, m, p);
  REQUIRE(tr.converged);
  RetractionTrace tr2 = retract(tr.fixed_point, m, p);
  CHECK(tr2.converged);
  CHECK(tr2.n_steps == 1);
  CHECK(tr2.final_residual <= 1e-10 * p.c * p.c * p.q);
}

TEST_CASE("negative-sector state collapses to zero at alpha = Z = 0") {
  ModelSpace m = grid_model(16, 10.0, 5.0, 0.0);
  PhysParams p{0.0, 5.0, 0.0, 2};
  auto [lp, lm] = free_projectors(m);
  Rng rng(2);
  Mat h = sample_gamma_q(rng, m.dim, 2.0, 0.5);
  DensityMatrix sea(lm * h * lm);
  DensityMatrix t = t_map(sea, m, p);
  CHECK(op_norm_hermitian(t.mat()) <= 1e-12);
}

TEST_CASE("geometric convergence with contraction ratio below one") {
  ModelSpace m = grid_model(24, 15.0, 10.0, 1.0);
  PhysParams p{0.1, 10.0, 1.0, 2};
  DensityMatrix start = aufbau_of_linear(m, p, 2);
  RetractionTrace tr = retract(start, m, p);
  REQUIRE(tr.converged);
  CHECK(tr.ratio_obs < 1.0);
  CHECK(!tr.ratio_flagged);
  for (size_t n = 1; n < tr.residuals.size(); ++n)
    CHECK(tr.residuals[n] <=
          tr.residuals[0] * std::pow(tr.ratio_obs, double(n)) *
              (1.0 + 1e-6));
  // The fixed point is a Gamma_q^+ member.
  MeanField mf = mean_field(tr.fixed_point, m, p);
  CHECK(in_gamma_q_plus(tr.fixed_point, mf, 2.0, 1e-8));
  if (tr.ratio_obs > 0.0)
    CHECK(tr.aposteriori_bound >= 0.0);
}

TEST_CASE("observed contraction shrinks as c grows") {
  PhysParams base{0.1, 0.0, 1.0, 2};
  double prev = 1e9;
  for (double c : {5.0, 10.0, 20.0, 40.0}) {
    ModelSpace m = grid_model(24, 15.0, c, 1.0);
    PhysParams p = base;
    p.c = c;
    DensityMatrix start = aufbau_of_linear(m, p, 2);
    RetractionTrace tr = retract(start, m, p);
    REQUIRE(tr.converged);
    if (tr.ratio_obs > 0.0) {
      CHECK(tr.ratio_obs < prev);
      prev = tr.ratio_obs;
    }
  }
}

TEST_CASE("ur certificate: zero state, minimizer-scale state, blowup") {
  ModelSpace m = grid_model(16, 10.0, 6.0, 1.0);
  PhysParams p{0.05, 6.0, 1.0, 2};
  DensityMatrix zero(Mat::Zero(m.dim, m.dim));
  URCertificate c0 = ur_certificate(zero, m, p, 1.0);
  CHECK(c0.term1 == 0.0);
  CHECK(c0.term2 == 0.0);
  CHECK(c0.member);

  double radius = default_retraction_radius(m, p);
  CHECK(radius >= 2.0 * p.q);  // 2(1+K^2)q with K >= 0
  DensityMatrix start = aufbau_of_linear(m, p, 2);
  RetractionTrace tr = retract(start, m, p);
  URCertificate cm = ur_certificate(tr.fixed_point, m, p, radius);
  CHECK(cm.member);

  // A state that saturates every high mode has a huge kinetic term1.
  auto [lp, lm] = free_projectors(m);
  URCertificate cbad = ur_certificate(DensityMatrix(lp), m, p, radius);
  CHECK(!cbad.member);
}

TEST_CASE("df_energy: fixed points evaluate through the plain functional") {
  ModelSpace m = grid_model(16, 10.0, 8.0, 1.0);
  PhysParams p{0.08, 8.0, 1.0, 2};
  DensityMatrix start = aufbau_of_linear(m, p, 2);
  RetractionTrace tr = retract(start, m, p);
  auto [e, trace2] = df_energy(tr.fixed_point, m, p);
  CHECK(e == doctest::Approx(energy(tr.fixed_point, m, p)).epsilon(1e-12));

  DensityMatrix zero(Mat::Zero(m.dim, m.dim));
  auto [e0, tr0] = df_energy(zero, m, p);
  CHECK(e0 == 0.0);
}

TEST_CASE("non-convergence carries the partial trace") {
  ModelSpace m = grid_model(16, 10.0, 5.0, 1.0);
  PhysParams p{0.2, 5.0, 1.0, 2};
  DensityMatrix start = aufbau_of_linear(m, p, 2);
  RetractOptions opts;
  opts.max_iter = 1;
  opts.tol_fixed = 1e-300;  // force failure
  try {
    retract(start, m, p, opts);
    CHECK(false);
  } catch (const RetractionFailure& e) {
    CHECK(e.trace.n_steps == 1);
    CHECK(!e.trace.converged);
    CHECK(e.trace.residuals.size() == 1);
  }
}
