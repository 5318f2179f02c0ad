#include "dflab/linalg.hpp"

namespace dflab {

double op_norm_hermitian(const Mat& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double op_norm(const Mat& a) {
  if (a.rows() == 0) return 0.0;
  Mat gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(gram),
                                        Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return top > 0.0 ? std::sqrt(top) : 0.0;
}

double trace_norm_hermitian(const Mat& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_norm(const Mat& a) {
  if (a.rows() == 0) return 0.0;
  Mat gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(gram),
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

double min_eig_hermitian(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace dflab
