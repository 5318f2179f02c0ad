#pragma once

// The compression map T(g) = P+_g g P+_g, its iteration to the fixed point,
// membership certificates for the retraction neighborhood U_R, and the
// retracted energy E(g) = energy(fixed point of T from g).

#include <vector>

#include "dflab/density.hpp"
#include "dflab/meanfield.hpp"

namespace dflab {

struct RetractOptions {
  double tol_fixed = -1.0;  // X_c residual target; <0 means 1e-10 c^2 q
  int max_iter = 200;
  bool store_iterates = false;  // debug: keep full matrices per step
};

struct RetractionTrace {
  std::vector<double> residuals;  // ||T^{n+1} - T^n||_{X_c} per step
  double ratio_obs = 0.0;         // max successive residual ratio
  bool ratio_flagged = false;     // some ratio >= 1 observed
  bool converged = false;
  DensityMatrix fixed_point;
  int n_steps = 0;
  double final_residual = 0.0;
  // residual * ratio/(1-ratio) geometric tail estimate, when ratio < 1
  double aposteriori_bound = 0.0;
  // ||P+ theta P+ - theta|| membership residual of the fixed point
  double gamma_q_plus_residual = 0.0;
  std::vector<Mat> iterates;  // only with store_iterates
};

struct RetractionFailure : ConvergenceError {
  RetractionFailure(const std::string& what, RetractionTrace t)
      : ConvergenceError(what), trace(std::move(t)) {}
  RetractionTrace trace;
};

struct URCertificate {
  double term1 = 0.0;  // (1/c) ||g |D|^{1/2}||_s1
  double term2 = 0.0;  // (A(alpha,c)/c^2) ||T(g)-g||_{X_c}
  double R = 0.0;
  bool member = false;  // term1 + term2 < R
};

// One application of T; propagates GapCollapseError.
DensityMatrix t_map(const DensityMatrix& g, const ModelSpace& m,
                    const PhysParams& p);

// Iterate T to the fixed point. Throws RetractionFailure (trace attached)
// when max_iter is reached above tolerance; a contraction ratio >= 1 is
// flagged in the trace, not an error.
RetractionTrace retract(const DensityMatrix& g, const ModelSpace& m,
                        const PhysParams& p, const RetractOptions& opts = {});

URCertificate ur_certificate(const DensityMatrix& g, const ModelSpace& m,
                             const PhysParams& p, double R);

// E(g) = energy(fixed point); for g already in Gamma_q^+ this is energy(g)
// reached in one step.
std::pair<double, RetractionTrace> df_energy(const DensityMatrix& g,
                                             const ModelSpace& m,
                                             const PhysParams& p,
                                             const RetractOptions& opts = {});

// Default retraction radius 2(1+K^2)q, with K the measured H^1 bound of the
// q lowest positive eigenfunctions of D - V on this model.
double default_retraction_radius(const ModelSpace& m, const PhysParams& p);

}  // namespace dflab
