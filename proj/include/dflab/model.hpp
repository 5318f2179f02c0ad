#pragma once

// Finite-dimensional realizations of the free Dirac operator, the external
// attraction, the pair-interaction kernel and the functional calculus that
// backs every norm. Two backends:
//
//   dirac1d   - 2-component spinors on a periodic 1D grid; the kinetic term
//               -ic s1 d/dx is the exact spectral (Fourier) derivative, the
//               mass term is c^2 s3, so beta = s3 and the spectrum is the
//               exact lattice dispersion +-sqrt(c^4 + c^2 xi^2) with no
//               doubler modes. Attraction and repulsion use the softened
//               kernel w(r) = 1/sqrt(r_min_image^2 + a_soft^2).
//   synthetic - seeded random instance with the same algebraic structure:
//               kinetic symbol in a random (or Fourier) spatial frame,
//               random Gram interaction kernel, random positive diagonal
//               attraction. Used to property-test projector and retraction
//               machinery over thousands of instances.
//
// Vectors are plain l^2 coordinate vectors, spatial-major and spinor-minor
// (index 2*i+s for grid point i, spinor component s; s=0 is the upper
// component). Kernel sample values carry the quadrature weight convention
// ker(x_i,x_j) = mat(2i+s,2j+s')/dx, so Hartree/exchange assembly uses the
// matrix entries directly and dx only appears in the density profile.

#include <cstdint>
#include <string>

#include "dflab/errors.hpp"
#include "dflab/linalg.hpp"
#include "dflab/params.hpp"

namespace dflab {

enum class Backend { dirac1d, synthetic };

struct ModelConfig {
  Backend backend = Backend::dirac1d;
  int n_grid = 64;         // spatial points (dirac1d)
  double box_len = 40.0;   // spatial period
  double soften = 0.0;     // softening length; 0 means one grid spacing
  std::uint64_t seed = 1;  // synthetic backend only
  int synth_dim = 32;      // total dimension (even) of the synthetic space
  double synth_gap = 0.0;  // scale of the kinetic-symbol draws; 0 means c^2
  bool synth_symmetric = false;  // ring-symmetric instance (exactly
                                 // degenerate +-k shells, circulant kernel)

  void validate() const;  // throws ConfigError
};

class ModelSpace {
 public:
  ModelConfig cfg;
  double c = 0.0, Z = 0.0;

  int n_grid = 0;
  int n_spinor = 2;
  int dim = 0;
  double box_len = 0.0;
  double dx = 1.0;
  RVec grid;  // spatial coordinates (indices for the synthetic backend)

  Mat u_space;      // n_grid x n_grid unitary spatial frame
  RVec kin_symbol;  // kinetic symbol t_k per mode (c*xi_k on the grid)
  RVec lap_eigs;    // eigenvalues of -Delta per mode, (t_k/c)^2

  Mat d_free;          // free operator, Hermitian dim x dim
  Mat d_free_shifted;  // d_free - c^2, assembled without cancellation
  Mat v_mat;           // attraction magnitude (positive diagonal);
                       // the sign convention D - V applies at assembly
  RVec v_diag;
  RVec beta_diag;  // +1 upper / -1 lower component
  RMat w_kernel;   // n_grid x n_grid, symmetric positive semidefinite

  // Cached powers used by the norms (built once).
  Mat sqrt_abs_d;    // |D|^{1/2}
  Mat x_quarter;     // (1-Delta)^{1/4}
  Mat y_half;        // (1-Delta)^{1/2}

  Mat beta_mat() const;
  // Spatial operator from a per-mode multiplier in the model frame.
  Mat spatial_op(const RVec& multiplier) const;
  // Lift an n_grid x n_grid spatial operator to the full space (identity in
  // spinor indices).
  Mat lift(const Mat& spatial) const;
};

ModelSpace build_model(const ModelConfig& cfg, const PhysParams& p);

// Spectral projectors of d_free onto the positive/negative spectrum.
// Throws GapCollapseError if an eigenvalue lies inside (-1e-8 c^2, 1e-8 c^2).
std::pair<Mat, Mat> free_projectors(const ModelSpace& m);

enum class OpKind { abs_d, one_minus_lap, c4_minus_c2_lap };

// Operator power: |D|^s via the eigendecomposition of d_free, the two
// Laplacian-based calculi via the stored mode multipliers. Throws
// DomainError for a nonpositive spectrum with fractional s.
Mat op_power(const ModelSpace& m, OpKind which, double s);

}  // namespace dflab
