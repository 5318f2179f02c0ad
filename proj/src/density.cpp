#include "dflab/density.hpp"

#include "dflab/meanfield.hpp"

namespace dflab {

DensityMatrix::DensityMatrix(Mat m, bool clamp_to_gamma) {
  mat_ = hermitian_part(m);
  if (clamp_to_gamma) {
    Eigen::SelfAdjointEigenSolver<Mat> es(mat_);
    RVec ev = es.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
    mat_ = hermitian_part(es.eigenvectors() * ev.asDiagonal() *
                          es.eigenvectors().adjoint());
    eig_ = std::make_shared<std::pair<RVec, Mat>>(ev, es.eigenvectors());
  }
}

void DensityMatrix::ensure_eig() const {
  std::lock_guard<std::mutex> lock(*eig_mutex_);
  if (eig_) return;
  Eigen::SelfAdjointEigenSolver<Mat> es(mat_);
  eig_ = std::make_shared<std::pair<RVec, Mat>>(es.eigenvalues(),
                                                es.eigenvectors());
}

const RVec& DensityMatrix::occupations() const {
  ensure_eig();
  return eig_->first;
}

const Mat& DensityMatrix::eigenvectors() const {
  ensure_eig();
  return eig_->second;
}

NormReport norms(const DensityMatrix& g, const ModelSpace& m) {
  NormReport r;
  r.sigma1 = g.occupations().cwiseAbs().sum();
  r.x_norm = trace_norm_hermitian(m.x_quarter * g.mat() * m.x_quarter);
  r.y_norm = trace_norm_hermitian(m.y_half * g.mat() * m.y_half);
  r.xc_norm = trace_norm_hermitian(m.sqrt_abs_d * g.mat() * m.sqrt_abs_d);
  return r;
}

RVec density_profile(const DensityMatrix& g, const ModelSpace& m) {
  RVec rho(m.n_grid);
  for (int i = 0; i < m.n_grid; ++i)
    rho[i] = (g.mat()(2 * i, 2 * i).real() +
              g.mat()(2 * i + 1, 2 * i + 1).real()) /
             m.dx;
  return rho;
}

bool in_gamma_q(const DensityMatrix& g, double q, double tol,
                MembershipReport* rep) {
  MembershipReport r;
  const RVec& occ = g.occupations();
  r.eig_low_excess = std::max(0.0, -occ.minCoeff());
  r.eig_high_excess = std::max(0.0, occ.maxCoeff() - 1.0);
  r.trace = g.trace();
  r.trace_excess = std::max(0.0, r.trace - q);
  r.member =
      r.eig_low_excess <= tol && r.eig_high_excess <= tol && r.trace_excess <= tol;
  if (rep) *rep = r;
  return r.member;
}

bool in_gamma_q_plus(const DensityMatrix& g, const MeanField& mf, double q,
                     double tol, MembershipReport* rep) {
  MembershipReport r;
  in_gamma_q(g, q, tol, &r);
  Mat compressed = mf.p_plus * g.mat() * mf.p_plus;
  r.block_residual = op_norm_hermitian(hermitian_part(compressed - g.mat()));
  r.member = r.member && r.block_residual <= tol;
  if (rep) *rep = r;
  return r.member;
}

bool in_gamma_q_g(const DensityMatrix& g, const Mat& p_plus_g,
                  const Mat& p_minus_g, double q, double tol,
                  MembershipReport* rep) {
  MembershipReport r;
  r.trace = g.trace();
  r.trace_excess = std::max({0.0, r.trace - q, -r.trace});
  // Spectral bounds -P- <= g <= P+ as positive semidefiniteness.
  double lo = min_eig_hermitian(hermitian_part(g.mat() + p_minus_g));
  double hi = min_eig_hermitian(hermitian_part(p_plus_g - g.mat()));
  r.eig_low_excess = std::max(0.0, -lo);
  r.eig_high_excess = std::max(0.0, -hi);
  r.block_residual = op_norm(p_plus_g * g.mat() * p_minus_g);
  r.member = r.eig_low_excess <= tol && r.eig_high_excess <= tol &&
             r.block_residual <= tol && r.trace_excess <= tol;
  if (rep) *rep = r;
  return r.member;
}

}  // namespace dflab
