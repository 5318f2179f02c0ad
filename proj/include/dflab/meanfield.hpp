#pragma once

// Assembly of the self-consistent operator D_g = D - V + alpha*W_g, its
// spectral data and projectors, the energy functional in both algebraic
// forms, the projector Gateaux derivative dP+ and the [W_h, beta]
// commutator.
//
// All spectral work runs on the shifted operator D_g - c^2, whose matrix is
// assembled without cancellation; eigenvalues are stored shifted
// (eps_j - c^2), which keeps energies and Fermi levels accurate at large c.

#include <vector>

#include "dflab/density.hpp"
#include "dflab/linalg.hpp"
#include "dflab/model.hpp"
#include "dflab/params.hpp"

namespace dflab {

struct MeanField {
  Mat d_shifted;      // D_g - c^2
  RVec eigs_shifted;  // ascending eigenvalues of d_shifted (eps_j - c^2)
  Mat vecs;           // matching eigenvectors (columns)
  Mat p_plus, p_minus;
  double gap = 0.0;   // min |eps_j| of the unshifted operator
  double c2 = 0.0;
  // Shifted positive eigenvalues below the upper gap edge: eps in (0, c^2]
  // stored as eps - c^2 in (-c^2, 0].
  std::vector<double> nu_levels_shifted;

  bool is_positive(int j) const { return eigs_shifted[j] + c2 > 0.0; }
  double eig(int j) const { return eigs_shifted[j] + c2; }
};

// Bare interaction operator W_g (no alpha factor): Hartree part diagonal in
// space and scalar in spin, exchange part kernel * spinor blocks.
Mat w_of(const Mat& g, const ModelSpace& m);
inline Mat w_of(const DensityMatrix& g, const ModelSpace& m) {
  return w_of(g.mat(), m);
}

// Pair interaction energy sum_ij W(i,j)[rho_i(a) rho_j(b)
// - tr2(a_ij b_ji)]; bilinear and symmetric. Tr[W_a b] equals this.
double pair_energy(const Mat& a, const Mat& b, const ModelSpace& m);

// Assemble and diagonalize D_g; throws GapCollapseError when an eigenvalue
// sits within 1e-8 c^2 of zero.
MeanField mean_field(const DensityMatrix& g, const ModelSpace& m,
                     const PhysParams& p);

// DF functional (rest mass subtracted):
//   E(g) = Tr[(D - c^2 - V) g] + (alpha/2) pair(g, g).
double energy(const DensityMatrix& g, const ModelSpace& m,
              const PhysParams& p);

// Equivalent form Tr[(D_g - c^2) g] - (alpha/2) Tr[W_g g] through an
// assembled mean field; agrees with energy() to roundoff.
double energy_via_meanfield(const DensityMatrix& g, const MeanField& mf,
                            const ModelSpace& m, const PhysParams& p);

// Gateaux derivative of P+ at the state underlying mf, applied to the
// Hermitian direction h. Exact divided-difference formula in the eigenbasis:
// cross-gap entries alpha <v_i|W_h|v_j> (1_{+} - 1_{+})/(eps_i - eps_j),
// same-sign entries zero. Throws DegeneratePairError when a cross-gap pair
// is closer than 1e-10 c^2.
Mat dp_plus(const Mat& h, const MeanField& mf, const ModelSpace& m,
            const PhysParams& p);

// [W_h, beta] and its operator norm. Only the exchange part contributes
// (the Hartree part is scalar in spin).
std::pair<Mat, double> beta_commutator(const Mat& h, const ModelSpace& m);

// Calibrated coupling strength kappa_disc(g) = ||V |D|^-1|| +
// alpha ||W_g |D|^-1||; the exact finite-dimensional sandwich
// (1-kappa)|D| <= |D_g| <= (1+kappa)|D| holds with this constant.
double kappa_disc(const DensityMatrix& g, const ModelSpace& m,
                  const PhysParams& p);

}  // namespace dflab
