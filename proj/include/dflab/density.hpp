#pragma once

// Density-matrix value type, the constraint sets Gamma_q / Gamma_q^+ /
// Gamma_q^(g) with residual reports, and the four kinetic-weighted trace
// norms (sigma1, X, Y, X_c).

#include <memory>
#include <mutex>
#include <optional>

#include "dflab/linalg.hpp"
#include "dflab/model.hpp"

namespace dflab {

struct MeanField;  // meanfield.hpp

class DensityMatrix {
 public:
  DensityMatrix() = default;
  // Hermitizes the input; when clamp_to_gamma is set the eigenvalues are
  // clamped into [0,1] on construction.
  explicit DensityMatrix(Mat m, bool clamp_to_gamma = false);

  const Mat& mat() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  double trace() const { return trace_real(mat_); }

  // Eigenvalues ascending / matching eigenvectors, computed lazily and
  // cached; safe to call from several threads.
  const RVec& occupations() const;
  const Mat& eigenvectors() const;

 private:
  void ensure_eig() const;

  Mat mat_;
  mutable std::shared_ptr<std::pair<RVec, Mat>> eig_;
  mutable std::shared_ptr<std::mutex> eig_mutex_ =
      std::make_shared<std::mutex>();
};

struct NormReport {
  double sigma1 = 0.0;   // trace norm
  double x_norm = 0.0;   // ||(1-D)^{1/4} g (1-D)^{1/4}||_s1
  double y_norm = 0.0;   // ||(1-D)^{1/2} g (1-D)^{1/2}||_s1
  double xc_norm = 0.0;  // |||D|^{1/2} g |D|^{1/2}||_s1
};

NormReport norms(const DensityMatrix& g, const ModelSpace& m);

// One-particle density rho(x_i); sums to trace * (1/dx) * dx, i.e.
// sum_i rho_i * dx == Tr.
RVec density_profile(const DensityMatrix& g, const ModelSpace& m);

struct MembershipReport {
  double eig_low_excess = 0.0;    // max(0, -min eigenvalue)
  double eig_high_excess = 0.0;   // max(0, max eigenvalue - 1)
  double trace_excess = 0.0;      // max(0, trace - q)
  double trace = 0.0;
  double block_residual = 0.0;    // set-specific operator residual
  bool member = false;
};

bool in_gamma_q(const DensityMatrix& g, double q, double tol,
                MembershipReport* rep = nullptr);

// Gamma_q^+ wrt the state's own mean field: ||P+ g P+ - g|| <= tol.
bool in_gamma_q_plus(const DensityMatrix& g, const MeanField& mf, double q,
                     double tol, MembershipReport* rep = nullptr);

// Gamma_q^(g) for a fixed sea: -P- <= g <= P+, P+ g P- = 0, 0 <= Tr <= q.
bool in_gamma_q_g(const DensityMatrix& g, const Mat& p_plus_g,
                  const Mat& p_minus_g, double q, double tol,
                  MembershipReport* rep = nullptr);

}  // namespace dflab
