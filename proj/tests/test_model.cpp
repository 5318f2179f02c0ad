#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dflab/model.hpp"

using namespace dflab;

namespace {

ModelSpace grid_model(int n, double box, double c, double z,
                      double soften = 0.0) {
  ModelConfig cfg;
  cfg.backend = Backend::dirac1d;
  cfg.n_grid = n;
  cfg.box_len = box;
  cfg.soften = soften;
  PhysParams p{0.0, c, z, 1};
  return build_model(cfg, p);
}

ModelSpace synth_model(int dim, std::uint64_t seed, double c,
                       bool symmetric = false) {
  ModelConfig cfg;
  cfg.backend = Backend::synthetic;
  cfg.synth_dim = dim;
  cfg.seed = seed;
  cfg.synth_symmetric = symmetric;
  PhysParams p{0.0, c, 1.0, 1};
  return build_model(cfg, p);
}

}  // namespace

TEST_CASE("free 1d operator: exact lattice dispersion") {
  const int n = 64;
  const double box = 40.0, c = 10.0;
  ModelSpace m = grid_model(n, box, c, 0.0);
  REQUIRE(m.dim == 2 * n);

  Eigen::SelfAdjointEigenSolver<Mat> es(m.d_free);
  RVec ev = es.eigenvalues();

  // Spectrum symmetric about zero.
  for (int j = 0; j < m.dim / 2; ++j)
    CHECK(ev[j] == doctest::Approx(-ev[m.dim - 1 - j]).epsilon(1e-12));

  // Eigenvalue multiset equals +-sqrt(c^4 + c^2 xi^2) over the FFT modes
  // (dense eigensolve against the analytic dispersion).
  std::vector<double> expect;
  for (int j = 0; j < n; ++j) {
    double xi = m.kin_symbol[j] / c;
    double e = std::sqrt(c * c * c * c + c * c * xi * xi);
    expect.push_back(e);
    expect.push_back(-e);
  }
  std::sort(expect.begin(), expect.end());
  for (int j = 0; j < m.dim; ++j)
    CHECK(ev[j] == doctest::Approx(expect[j]).epsilon(1e-10));

  // Gap exactly at +-c^2 (zero-momentum mode).
  double min_pos = 1e300;
  for (int j = 0; j < m.dim; ++j)
    if (ev[j] > 0.0) min_pos = std::min(min_pos, ev[j]);
  CHECK(min_pos == doctest::Approx(c * c).epsilon(1e-12));
}

TEST_CASE("beta algebra and the squared-operator identity") {
  ModelSpace m = grid_model(32, 20.0, 5.0, 1.0);
  Mat beta = m.beta_mat();
  CHECK((beta * beta - Mat::Identity(m.dim, m.dim)).norm() == 0.0);

  // beta anticommutes with the kinetic part.
  Mat kin = m.d_free - (m.c * m.c) * beta;
  CHECK((beta * kin + kin * beta).norm() <= 1e-10 * kin.norm());

  // D^2 == c^4 - c^2 Delta on the same mode set, to roundoff, across the
  // whole tested range of c.
  for (double c : {5.0, 50.0, 500.0}) {
    ModelSpace mc_model = grid_model(32, 20.0, c, 1.0);
    Mat d2 = mc_model.d_free * mc_model.d_free;
    Mat c4c2 = op_power(mc_model, OpKind::c4_minus_c2_lap, 1.0);
    CHECK((d2 - c4c2).norm() <= 1e-8 * c4c2.norm());
  }

  // Shifted assembly: d_free_shifted == d_free - c^2 exactly.
  Mat diff = m.d_free_shifted -
             (m.d_free - (m.c * m.c) * Mat::Identity(m.dim, m.dim));
  CHECK(diff.norm() == 0.0);
}

TEST_CASE("interaction kernel is symmetric positive semidefinite") {
  for (double box : {10.0, 40.0}) {
    ModelSpace m = grid_model(48, box, 8.0, 2.0);
    CHECK((m.w_kernel - m.w_kernel.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<RMat> es(m.w_kernel,
                                           Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >=
          -1e-10 * es.eigenvalues().maxCoeff());
  }
  // Wide softening resolves the wrap-around cusp; the symbol clamp must
  // keep the kernel PSD there too.
  ModelSpace wide = grid_model(64, 20.0, 8.0, 2.0, 1.25);
  Eigen::SelfAdjointEigenSolver<RMat> es(wide.w_kernel,
                                         Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >=
        -1e-10 * es.eigenvalues().maxCoeff());
}

TEST_CASE("kernel equals the min-image samples at default softening") {
  // At a_soft = dx the circulant symbol is strictly positive, so the PSD
  // projection reduces to the identity on the sampled kernel.
  ModelSpace m = grid_model(64, 40.0, 10.0, 2.0);
  const double a = m.dx;
  for (int j = 0; j < m.n_grid; ++j) {
    double r = std::min(j * m.dx, m.box_len - j * m.dx);
    double w = 1.0 / std::sqrt(r * r + a * a);
    CHECK(m.w_kernel(0, j) == doctest::Approx(w).epsilon(1e-12));
  }
}

TEST_CASE("potential: peak at the nucleus, positive, spin-scalar") {
  ModelSpace m = grid_model(32, 16.0, 5.0, 3.0);
  double peak = m.v_diag.maxCoeff();
  CHECK(peak == doctest::Approx(3.0 / m.dx).epsilon(1e-12));  // Z w(0)
  CHECK(m.v_diag.minCoeff() > 0.0);
  CHECK(m.v_diag[m.n_grid / 2] == doctest::Approx(peak));
}

TEST_CASE("free projectors: ranks, orthogonality, commutation") {
  ModelSpace m = grid_model(24, 12.0, 6.0, 0.5);
  auto [lp, lm] = free_projectors(m);
  CHECK(trace_real(lp) == doctest::Approx(m.dim / 2.0).epsilon(1e-12));
  CHECK(trace_real(lm) == doctest::Approx(m.dim / 2.0).epsilon(1e-12));
  CHECK((lp + lm - Mat::Identity(m.dim, m.dim)).norm() <= 1e-12 * m.dim);
  CHECK((lp * lp - lp).norm() <= 1e-12 * m.dim);
  CHECK(op_norm(lp * m.d_free * lm) <= 1e-12 * op_norm_hermitian(m.d_free));
}

TEST_CASE("synthetic backend: seeded determinism and structure") {
  ModelSpace a = synth_model(16, 42, 7.0);
  ModelSpace b = synth_model(16, 42, 7.0);
  CHECK((a.d_free - b.d_free).norm() == 0.0);  // bitwise reproducible
  CHECK((a.w_kernel - b.w_kernel).norm() == 0.0);
  CHECK((a.v_diag - b.v_diag).norm() == 0.0);

  ModelSpace c2 = synth_model(16, 43, 7.0);
  CHECK((a.d_free - c2.d_free).norm() > 0.0);

  // +- pairing of the synthetic spectrum.
  Eigen::SelfAdjointEigenSolver<Mat> es(a.d_free, Eigen::EigenvaluesOnly);
  RVec ev = es.eigenvalues();
  for (int j = 0; j < a.dim / 2; ++j)
    CHECK(ev[j] == doctest::Approx(-ev[a.dim - 1 - j]).epsilon(1e-10));
  CHECK(ev.cwiseAbs().minCoeff() >= 7.0 * 7.0 * (1.0 - 1e-12));

  // beta anticommutation holds for the synthetic kinetic part too.
  Mat beta = a.beta_mat();
  Mat kin = a.d_free - (a.c * a.c) * beta;
  CHECK((beta * kin + kin * beta).norm() <= 1e-10 * kin.norm());

  // ||V|| = Z * max_i W(i,i).
  CHECK(a.v_diag.maxCoeff() ==
        doctest::Approx(1.0 * a.w_kernel.diagonal().maxCoeff())
            .epsilon(1e-12));
}

TEST_CASE("synthetic diagonal limit: projectors are coordinate selections") {
  // With a vanishing kinetic-symbol scale the synthetic operator reduces
  // to c^2 (I x s3), literally diagonal; the spectral projectors are the
  // coordinate projections onto upper/lower entries.
  ModelConfig cfg;
  cfg.backend = Backend::synthetic;
  cfg.synth_dim = 16;
  cfg.seed = 4;
  cfg.synth_gap = 1e-12;
  PhysParams p{0.0, 3.0, 1.0, 1};
  ModelSpace m = build_model(cfg, p);
  auto [lp, lm] = free_projectors(m);
  Mat expect_p = Mat::Zero(m.dim, m.dim);
  Mat expect_m = Mat::Zero(m.dim, m.dim);
  for (int i = 0; i < m.n_grid; ++i) {
    expect_p(2 * i, 2 * i) = 1.0;
    expect_m(2 * i + 1, 2 * i + 1) = 1.0;
  }
  CHECK((lp - expect_p).norm() <= 1e-10);
  CHECK((lm - expect_m).norm() <= 1e-10);
}

TEST_CASE("symmetric synthetic ring: exact +-k degeneracy") {
  ModelSpace m = synth_model(26, 5, 6.0, true);  // 13 sites
  Eigen::SelfAdjointEigenSolver<Mat> es(m.d_free, Eigen::EigenvaluesOnly);
  RVec ev = es.eigenvalues();
  std::vector<double> pos;
  for (int j = 0; j < m.dim; ++j)
    if (ev[j] > 0.0) pos.push_back(ev[j]);
  std::sort(pos.begin(), pos.end());
  REQUIRE(pos.size() == 13);
  // One k = 0 singleton at c^2, then exactly degenerate pairs.
  CHECK(pos[0] == doctest::Approx(36.0).epsilon(1e-12));
  for (size_t j = 1; j + 1 < pos.size(); j += 2)
    CHECK(pos[j] == doctest::Approx(pos[j + 1]).epsilon(1e-12));
  // Circulant kernel is PSD and translation invariant.
  for (int i = 0; i < m.n_grid; ++i)
    CHECK(m.w_kernel(i, (i + 1) % m.n_grid) ==
          doctest::Approx(m.w_kernel(0, 1)).epsilon(1e-12));
}

TEST_CASE("op_power identities") {
  ModelSpace m = grid_model(16, 10.0, 4.0, 0.7);
  Mat id = op_power(m, OpKind::one_minus_lap, 0.0);
  CHECK((id - Mat::Identity(m.dim, m.dim)).norm() <= 1e-12 * m.dim);

  Mat a = op_power(m, OpKind::abs_d, 1.0);
  Mat ainv = op_power(m, OpKind::abs_d, -1.0);
  CHECK((a * ainv - Mat::Identity(m.dim, m.dim)).norm() <=
        1e-10 * std::sqrt(double(m.dim)));

  Mat half = op_power(m, OpKind::abs_d, 0.5);
  CHECK((half * half - a).norm() <= 1e-10 * a.norm());

  // |D|^{1/2} built at model construction agrees with the on-demand power.
  CHECK((m.sqrt_abs_d - half).norm() <= 1e-10 * half.norm());

  // X_c calculus: |D| equals (c^4 - c^2 Delta)^{1/2} identically here.
  Mat viaf = op_power(m, OpKind::c4_minus_c2_lap, 0.5);
  CHECK((a - viaf).norm() <= 1e-10 * a.norm());
}

TEST_CASE("config validation") {
  ModelConfig cfg;
  cfg.n_grid = 4;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.n_grid = 64;
  cfg.box_len = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  ModelConfig s;
  s.backend = Backend::synthetic;
  s.synth_dim = 7;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}
