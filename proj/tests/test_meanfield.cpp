#include <doctest.h>

#include <cmath>

#include "dflab/meanfield.hpp"
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

// Direct double-sum oracle for Tr[W_a b] over space and spin indices.
double pair_oracle(const Mat& a, const Mat& b, const ModelSpace& m) {
  double acc = 0.0;
  for (int i = 0; i < m.n_grid; ++i)
    for (int j = 0; j < m.n_grid; ++j) {
      double rho_a = a(2 * i, 2 * i).real() + a(2 * i + 1, 2 * i + 1).real();
      double rho_b = b(2 * j, 2 * j).real() + b(2 * j + 1, 2 * j + 1).real();
      Complex cross = 0.0;
      for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t)
          cross += a(2 * i + s, 2 * j + t) * b(2 * j + t, 2 * i + s);
      acc += m.w_kernel(i, j) * (rho_a * rho_b - cross.real());
    }
  return acc;
}

}  // namespace

TEST_CASE("w_of: zero state, hermiticity, pair-term oracle") {
  ModelSpace m = grid_model(12, 8.0, 4.0, 1.0);
  CHECK(w_of(Mat::Zero(m.dim, m.dim).eval(), m).norm() == 0.0);

  Rng rng(3);
  Mat g = sample_gamma_q(rng, m.dim, 2.0, 0.6);
  Mat w = w_of(g, m);
  CHECK(hermiticity_defect(w) <= 1e-12);

  // Tr[W_g g'] computed three ways: assembled operator, bilinear form,
  // explicit double sum.
  Mat g2 = sample_gamma_q(rng, m.dim, 1.0, 0.6);
  double via_op = frob_inner(w, g2);
  double via_pair = pair_energy(g, g2, m);
  double via_sum = pair_oracle(g, g2, m);
  CHECK(via_op == doctest::Approx(via_sum).epsilon(1e-11));
  CHECK(via_pair == doctest::Approx(via_sum).epsilon(1e-11));
}

TEST_CASE("rank-one self-interaction cancels exactly") {
  ModelSpace m = grid_model(16, 10.0, 5.0, 0.5);
  Rng rng(7);
  Vec u(m.dim);
  for (int i = 0; i < m.dim; ++i) u[i] = rng.cgaussian();
  u.normalize();
  Mat g = u * u.adjoint();
  Vec wu = w_of(g, m) * u;
  CHECK(wu.norm() <= 1e-12 * u.norm());

  // Concentrated at a single grid point (both spinor entries).
  Vec v = Vec::Zero(m.dim);
  v[2 * 3] = Complex(0.6, 0.2);
  v[2 * 3 + 1] = Complex(-0.4, 0.67);
  v.normalize();
  Mat gv = v * v.adjoint();
  CHECK((w_of(gv, m) * v).norm() <= 1e-12);
}

TEST_CASE("mean_field: limits and projector oracle") {
  ModelSpace m = grid_model(16, 10.0, 5.0, 1.0);
  PhysParams p{0.1, 5.0, 1.0, 2};
  DensityMatrix zero(Mat::Zero(m.dim, m.dim));

  // gamma = 0, Z = 0: D_gamma = D_free, projectors equal the free ones.
  ModelSpace m0 = grid_model(16, 10.0, 5.0, 0.0);
  PhysParams p0{0.1, 5.0, 0.0, 2};
  MeanField mf0 = mean_field(zero, m0, p0);
  auto [lp, lm] = free_projectors(m0);
  CHECK((mf0.p_plus - lp).norm() <= 1e-10 * lp.norm());

  // alpha = 0: D_gamma independent of gamma.
  PhysParams pa0{0.0, 5.0, 1.0, 2};
  Rng rng(5);
  Mat g = sample_gamma_q(rng, m.dim, 2.0, 0.5);
  MeanField a = mean_field(zero, m, pa0);
  MeanField b = mean_field(DensityMatrix(g), m, pa0);
  CHECK((a.d_shifted - b.d_shifted).norm() == 0.0);

  // Projectors match the sign function from an independent eigensolve of
  // the unshifted operator.
  MeanField mf = mean_field(DensityMatrix(g), m, p);
  Mat d_full = mf.d_shifted + (p.c * p.c) * Mat::Identity(m.dim, m.dim);
  Eigen::SelfAdjointEigenSolver<Mat> es(d_full);
  Mat plus = Mat::Zero(m.dim, m.dim);
  for (int j = 0; j < m.dim; ++j)
    if (es.eigenvalues()[j] > 0.0)
      plus += es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint();
  CHECK((mf.p_plus - plus).norm() <= 1e-9 * plus.norm());

  CHECK(mf.p_plus.rows() == m.dim);
  CHECK((mf.p_plus + mf.p_minus - Mat::Identity(m.dim, m.dim)).norm() <=
        1e-12 * m.dim);
  CHECK(mf.gap > 0.0);
}

TEST_CASE("energy: both algebraic forms agree on seeded states") {
  ModelConfig cfg;
  cfg.backend = Backend::synthetic;
  cfg.synth_dim = 16;
  cfg.seed = 9;
  PhysParams p{0.15, 4.0, 1.0, 2};
  ModelSpace m = build_model(cfg, p);

  DensityMatrix zero(Mat::Zero(m.dim, m.dim));
  CHECK(energy(zero, m, p) == 0.0);

  Rng rng(1);
  for (int s = 0; s < 1000; ++s) {
    Mat g = sample_gamma_q(rng, m.dim, 2.0, 0.6);
    DensityMatrix dg(g);
    double e1 = energy(dg, m, p);
    MeanField mf = mean_field(dg, m, p);
    double e2 = energy_via_meanfield(dg, mf, m, p);
    CHECK(e1 == doctest::Approx(e2).epsilon(1e-10));
  }
}

TEST_CASE("energy: alpha = 0 linear functional") {
  ModelSpace m = grid_model(16, 10.0, 5.0, 1.5);
  PhysParams p{0.0, 5.0, 1.5, 1};
  DensityMatrix zero(Mat::Zero(m.dim, m.dim));
  MeanField mf = mean_field(zero, m, p);
  // Lowest positive eigenvector of D - V.
  int j0 = -1;
  for (int j = 0; j < m.dim; ++j)
    if (mf.is_positive(j)) {
      j0 = j;
      break;
    }
  REQUIRE(j0 >= 0);
  Vec u = mf.vecs.col(j0);
  DensityMatrix g(u * u.adjoint());
  CHECK(energy(g, m, p) ==
        doctest::Approx(mf.eigs_shifted[j0]).epsilon(1e-10));
}

TEST_CASE("energy invariant under rotations inside degenerate blocks") {
  ModelSpace m = grid_model(16, 10.0, 5.0, 1.0);
  PhysParams p{0.08, 5.0, 1.0, 2};
  Rng rng(23);
  // Rank-2 projector: occupation block is the identity on its range, so
  // any unitary mixing of the two vectors leaves the kernel unchanged.
  Mat pr = random_projector(rng, m.dim, 2);
  Eigen::SelfAdjointEigenSolver<Mat> es(pr);
  Mat v2(m.dim, 2);
  v2.col(0) = es.eigenvectors().col(m.dim - 1);
  v2.col(1) = es.eigenvectors().col(m.dim - 2);
  Mat u2 = random_unitary(rng, 2);
  Mat w2 = v2 * u2;
  Mat rot = w2 * w2.adjoint();
  CHECK(energy(DensityMatrix(pr), m, p) ==
        doctest::Approx(energy(DensityMatrix(rot), m, p)).epsilon(1e-11));
}

TEST_CASE("dp_plus: blocks vanish and finite differences converge") {
  ModelConfig cfg;
  cfg.backend = Backend::synthetic;
  cfg.synth_dim = 20;
  cfg.seed = 31;
  PhysParams p{0.2, 5.0, 1.0, 2};
  ModelSpace m = build_model(cfg, p);
  Rng rng(2);
  Mat g = sample_gamma_q(rng, m.dim, 2.0, 0.5);
  MeanField mf = mean_field(DensityMatrix(g), m, p);

  CHECK(dp_plus(Mat::Zero(m.dim, m.dim), mf, m, p).norm() == 0.0);

  Mat h = random_hermitian(rng, m.dim);
  h /= op_norm_hermitian(h);
  Mat d = dp_plus(h, mf, m, p);
  double scale = std::max(1.0, op_norm_hermitian(d));
  CHECK(op_norm(mf.p_plus * d * mf.p_plus) <= 1e-12 * scale);
  CHECK(op_norm(mf.p_minus * d * mf.p_minus) <= 1e-12 * scale);

  // First-order convergence: error ratio ~ 10 between decades. At the
  // smallest t the quotient can sink to the dim*eps/t roundoff floor, so
  // only demand decay relative to the largest step there.
  MeanField m3 = mean_field(DensityMatrix(g + 1e-3 * h), m, p);
  MeanField m4 = mean_field(DensityMatrix(g + 1e-4 * h), m, p);
  MeanField m5 = mean_field(DensityMatrix(g + 1e-5 * h), m, p);
  double e3 = op_norm_hermitian(
      hermitian_part((m3.p_plus - mf.p_plus) / 1e-3 - d));
  double e4 = op_norm_hermitian(
      hermitian_part((m4.p_plus - mf.p_plus) / 1e-4 - d));
  double e5 = op_norm_hermitian(
      hermitian_part((m5.p_plus - mf.p_plus) / 1e-5 - d));
  CHECK(e3 / e4 > 3.0);
  CHECK(e3 / e4 < 30.0);
  CHECK(e5 < e3);
}

TEST_CASE("beta commutator: spin-diagonal states commute, oracle norm") {
  ModelSpace m = grid_model(12, 8.0, 6.0, 0.5);
  Rng rng(11);

  // Spin-block-diagonal h: no upper-lower coherence, so [W_h, beta] = 0.
  Mat h = Mat::Zero(m.dim, m.dim);
  Mat blk = random_hermitian(rng, m.n_grid);
  for (int i = 0; i < m.n_grid; ++i)
    for (int j = 0; j < m.n_grid; ++j) {
      h(2 * i, 2 * j) = blk(i, j);
      h(2 * i + 1, 2 * j + 1) = 0.3 * blk(i, j);
    }
  auto [comm0, n0] = beta_commutator(h, m);
  CHECK(n0 <= 1e-13 * op_norm_hermitian(h));

  // Random h: norm equals the independent SVD value.
  Mat h2 = random_hermitian(rng, m.dim);
  auto [comm, n] = beta_commutator(h2, m);
  Eigen::JacobiSVD<Mat> svd(comm);
  CHECK(n == doctest::Approx(svd.singularValues()(0)).epsilon(1e-10));

  // Only off-diagonal spinor blocks survive.
  for (int i = 0; i < m.n_grid; ++i)
    for (int j = 0; j < m.n_grid; ++j) {
      CHECK(std::abs(comm(2 * i, 2 * j)) == 0.0);
      CHECK(std::abs(comm(2 * i + 1, 2 * j + 1)) == 0.0);
    }
}

TEST_CASE("beta commutator scales as 1/c for 1/c lower components") {
  // |psi><psi| with lower component of size O(1/c): the commutator norm
  // follows the same law across a c sweep.
  std::vector<double> cs = {5.0, 10.0, 20.0, 40.0};
  std::vector<double> norms_c;
  for (double c : cs) {
    ModelSpace m = grid_model(16, 10.0, c, 0.5);
    Rng rng(4);
    Vec up(m.n_grid), low(m.n_grid);
    for (int i = 0; i < m.n_grid; ++i) {
      up[i] = rng.cgaussian();
      low[i] = rng.cgaussian();
    }
    Vec psi(m.dim);
    for (int i = 0; i < m.n_grid; ++i) {
      psi[2 * i] = up[i];
      psi[2 * i + 1] = low[i] / c;
    }
    psi.normalize();
    Mat h = psi * psi.adjoint();
    norms_c.push_back(beta_commutator(h, m).second);
  }
  // Log-log slope close to -1.
  double slope = std::log(norms_c.back() / norms_c.front()) /
                 std::log(cs.back() / cs.front());
  CHECK(slope == doctest::Approx(-1.0).epsilon(0.15));
}

TEST_CASE("calibrated sandwich and gap bounds hold sample-wise") {
  ModelSpace m = grid_model(12, 8.0, 5.0, 1.0);
  PhysParams p{0.1, 5.0, 1.0, 2};
  Rng rng(6);
  Mat abs_d = op_power(m, OpKind::abs_d, 1.0);
  for (int s = 0; s < 10; ++s) {
    Mat g = sample_gamma_q(rng, m.dim, 2.0, 0.5);
    DensityMatrix dg(g);
    double kd = kappa_disc(dg, m, p);
    MeanField mf = mean_field(dg, m, p);
    Mat abs_dg =
        mf.vecs *
        (mf.eigs_shifted.array() + p.c * p.c).abs().matrix().asDiagonal() *
        mf.vecs.adjoint();
    double tol = 1e-10 * op_norm_hermitian(abs_d) * (1.0 + kd);
    CHECK(min_eig_hermitian(hermitian_part((1.0 + kd) * abs_d - abs_dg)) >=
          -tol);
    REQUIRE(kd < 1.0);
    CHECK(min_eig_hermitian(hermitian_part(abs_dg - (1.0 - kd) * abs_d)) >=
          -tol);
    CHECK(mf.gap >= p.c * p.c * (1.0 - kd) * (1.0 - 1e-10));
  }
}

TEST_CASE("||W_g|| / ||g||_X ratio is stable across sample sizes") {
  ModelSpace m = grid_model(12, 8.0, 5.0, 1.0);
  auto max_ratio = [&](int n, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int s = 0; s < n; ++s) {
      Mat g = sample_gamma_q(rng, m.dim, 2.0, 0.6);
      DensityMatrix dg(g);
      double x = norms(dg, m).x_norm;
      if (x > 1e-12)
        worst = std::max(worst, op_norm_hermitian(w_of(g, m)) / x);
    }
    return worst;
  };
  double r1 = max_ratio(40, 99);
  double r2 = max_ratio(80, 99);  // same stream, doubled
  CHECK(r2 <= r1 * 1.01 + 1e-12);  // growth bounded by 1%
  CHECK(r2 >= r1 * (1.0 - 1e-12));
}
