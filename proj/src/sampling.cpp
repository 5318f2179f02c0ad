#include "dflab/sampling.hpp"

#include <cmath>

namespace dflab {

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  have_spare_ = true;
  return u * f;
}

Mat random_matrix(Rng& rng, int dim) {
  Mat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = rng.cgaussian();
  return a;
}

Mat random_hermitian(Rng& rng, int dim) {
  Mat a = random_matrix(rng, dim);
  return hermitian_part(a);
}

Mat random_unitary(Rng& rng, int dim) {
  Mat a = random_matrix(rng, dim);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ() * Mat::Identity(dim, dim);
  Mat r = q.adjoint() * a;
  for (int j = 0; j < dim; ++j) {
    Complex d = r(j, j);
    double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

Mat random_projector(Rng& rng, int dim, int k) {
  Mat u = random_unitary(rng, dim);
  Mat p = Mat::Zero(dim, dim);
  for (int j = 0; j < k; ++j) p += u.col(j) * u.col(j).adjoint();
  return hermitian_part(p);
}

Mat sample_gamma_q(Rng& rng, int dim, double q, double spread) {
  Mat h = spread * random_hermitian(rng, dim);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  RVec ev = es.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
  double tr = ev.sum();
  if (tr > q && tr > 0.0) ev *= q / tr;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace dflab
