#pragma once

// Dense complex linear algebra aliases and small helpers shared by all
// modules. Dimensions stay at desk scale (<= 512), so everything is dense
// and exact; there are no iterative estimators anywhere in the core.

#include <Eigen/Dense>
#include <complex>

namespace dflab {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline Mat hermitian_part(const Mat& a) { return 0.5 * (a + a.adjoint()); }

inline double hermiticity_defect(const Mat& a) {
  double n = a.norm();
  if (n == 0.0) return 0.0;
  return (a - a.adjoint()).norm() / n;
}

// Largest |eigenvalue| of a Hermitian matrix (operator norm).
double op_norm_hermitian(const Mat& a);

// Operator norm of a general matrix (largest singular value), computed as
// sqrt of the top eigenvalue of a^H a.
double op_norm(const Mat& a);

// Trace norm of a Hermitian matrix: sum of |eigenvalues|.
double trace_norm_hermitian(const Mat& a);

// Trace norm of a general matrix: sum of singular values, via the Hermitian
// eigenvalues of a^H a.
double trace_norm(const Mat& a);

// Smallest eigenvalue of a Hermitian matrix.
double min_eig_hermitian(const Mat& a);

// Real trace (the imaginary part of Tr is discarded; callers pass operators
// whose trace is real up to roundoff).
inline double trace_real(const Mat& a) { return a.trace().real(); }

// Frobenius inner product Re Tr[a^H b].
inline double frob_inner(const Mat& a, const Mat& b) {
  return (a.adjoint() * b).trace().real();
}

}  // namespace dflab
