#include "dflab/meanfield.hpp"

#include <cmath>

namespace dflab {

namespace {

// Spinor trace of the (i,i) block.
double block_trace(const Mat& g, int i) {
  return g(2 * i, 2 * i).real() + g(2 * i + 1, 2 * i + 1).real();
}

}  // namespace

Mat w_of(const Mat& g, const ModelSpace& m) {
  const int n = m.n_grid;
  RVec rho_hat(n);
  for (int i = 0; i < n; ++i) rho_hat[i] = block_trace(g, i);
  RVec hartree = m.w_kernel * rho_hat;

  Mat w = Mat::Zero(m.dim, m.dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double k = m.w_kernel(i, j);
      w(2 * i, 2 * j) = -k * g(2 * i, 2 * j);
      w(2 * i, 2 * j + 1) = -k * g(2 * i, 2 * j + 1);
      w(2 * i + 1, 2 * j) = -k * g(2 * i + 1, 2 * j);
      w(2 * i + 1, 2 * j + 1) = -k * g(2 * i + 1, 2 * j + 1);
    }
  for (int i = 0; i < n; ++i) {
    w(2 * i, 2 * i) += hartree[i];
    w(2 * i + 1, 2 * i + 1) += hartree[i];
  }
  return w;
}

double pair_energy(const Mat& a, const Mat& b, const ModelSpace& m) {
  const int n = m.n_grid;
  double direct = 0.0, exchange = 0.0;
  for (int i = 0; i < n; ++i) {
    const double rho_a = block_trace(a, i);
    for (int j = 0; j < n; ++j) {
      const double k = m.w_kernel(i, j);
      direct += k * rho_a * block_trace(b, j);
      Complex x = a(2 * i, 2 * j) * b(2 * j, 2 * i) +
                  a(2 * i, 2 * j + 1) * b(2 * j + 1, 2 * i) +
                  a(2 * i + 1, 2 * j) * b(2 * j, 2 * i + 1) +
                  a(2 * i + 1, 2 * j + 1) * b(2 * j + 1, 2 * i + 1);
      exchange += k * x.real();
    }
  }
  return direct - exchange;
}

MeanField mean_field(const DensityMatrix& g, const ModelSpace& m,
                     const PhysParams& p) {
  MeanField mf;
  mf.c2 = p.c * p.c;
  mf.d_shifted = m.d_free_shifted - m.v_mat;
  if (p.alpha != 0.0) mf.d_shifted += p.alpha * w_of(g.mat(), m);
  mf.d_shifted = hermitian_part(mf.d_shifted);

  Eigen::SelfAdjointEigenSolver<Mat> es(mf.d_shifted);
  mf.eigs_shifted = es.eigenvalues();
  mf.vecs = es.eigenvectors();

  mf.gap = (mf.eigs_shifted.array() + mf.c2).abs().minCoeff();
  if (mf.gap < 1e-8 * mf.c2)
    throw GapCollapseError("mean-field eigenvalue inside the gap guard");

  Mat plus = Mat::Zero(m.dim, m.dim);
  for (int j = 0; j < m.dim; ++j) {
    const double s = mf.eigs_shifted[j];
    if (s + mf.c2 > 0.0) {
      plus += mf.vecs.col(j) * mf.vecs.col(j).adjoint();
      if (s <= 0.0) mf.nu_levels_shifted.push_back(s);
    }
  }
  mf.p_plus = hermitian_part(plus);
  mf.p_minus = Mat::Identity(m.dim, m.dim) - mf.p_plus;
  return mf;
}

double energy(const DensityMatrix& g, const ModelSpace& m,
              const PhysParams& p) {
  Mat base = m.d_free_shifted - m.v_mat;
  double e = frob_inner(base, g.mat());
  if (p.alpha != 0.0) e += 0.5 * p.alpha * pair_energy(g.mat(), g.mat(), m);
  return e;
}

double energy_via_meanfield(const DensityMatrix& g, const MeanField& mf,
                            const ModelSpace& m, const PhysParams& p) {
  double e = frob_inner(mf.d_shifted, g.mat());
  if (p.alpha != 0.0) {
    Mat w = w_of(g.mat(), m);
    e -= 0.5 * p.alpha * frob_inner(w, g.mat());
  }
  return e;
}

Mat dp_plus(const Mat& h, const MeanField& mf, const ModelSpace& m,
            const PhysParams& p) {
  const int dim = m.dim;
  Mat wh = w_of(hermitian_part(h), m);
  Mat wt = mf.vecs.adjoint() * wh * mf.vecs;
  Mat d = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const bool pi = mf.is_positive(i);
    for (int j = 0; j < dim; ++j) {
      const bool pj = mf.is_positive(j);
      if (pi == pj) continue;  // same-sign entries vanish identically
      const double denom = mf.eigs_shifted[i] - mf.eigs_shifted[j];
      if (std::abs(denom) < 1e-10 * mf.c2)
        throw DegeneratePairError(
            "cross-gap eigenvalue pair too close for dP+");
      d(i, j) = p.alpha * wt(i, j) * ((pi ? 1.0 : 0.0) - (pj ? 1.0 : 0.0)) /
                denom;
    }
  }
  return hermitian_part(mf.vecs * d * mf.vecs.adjoint());
}

std::pair<Mat, double> beta_commutator(const Mat& h, const ModelSpace& m) {
  Mat w = w_of(hermitian_part(h), m);
  Mat comm(m.dim, m.dim);
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j)
      comm(i, j) = w(i, j) * (m.beta_diag[j] - m.beta_diag[i]);
  return {comm, op_norm(comm)};
}

double kappa_disc(const DensityMatrix& g, const ModelSpace& m,
                  const PhysParams& p) {
  Mat inv_abs_d = op_power(m, OpKind::abs_d, -1.0);
  double kv = op_norm(m.v_mat * inv_abs_d);
  double kw = 0.0;
  if (p.alpha != 0.0) kw = p.alpha * op_norm(w_of(g.mat(), m) * inv_abs_d);
  return kv + kw;
}

}  // namespace dflab
