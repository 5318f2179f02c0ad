#pragma once

// Shared helpers for the verification claims (internal to the library).

#include <string>
#include <vector>

#include "dflab/meanfield.hpp"
#include "dflab/retraction.hpp"
#include "dflab/sampling.hpp"
#include "dflab/verify.hpp"

namespace dflab::detail {

inline double xc_norm(const Mat& a, const ModelSpace& m) {
  return trace_norm_hermitian(m.sqrt_abs_d * a * m.sqrt_abs_d);
}

inline double x_norm(const Mat& a, const ModelSpace& m) {
  return trace_norm_hermitian(m.x_quarter * a * m.x_quarter);
}

inline double y_norm(const Mat& a, const ModelSpace& m) {
  return trace_norm_hermitian(m.y_half * a * m.y_half);
}

// Mixed-family Gamma_q sample: rotates between soft mixed states, rank-k
// projectors and compressed states so calibration sees saturated and
// interior spectra.
Mat gamma_sample(Rng& rng, const ModelSpace& m, int q, int family);

// Aufbau projector onto positive levels [k0, k0+q) (0-based among the
// positive spectrum) of the linear operator D - V.
DensityMatrix level_projector(const ModelSpace& m, const PhysParams& p,
                              int k0, int q);

// A (g, gamma) pair with P+_g gamma P+_g = gamma: the sea is the mean field
// of g, gamma is the ep-HF minimizer in that sea. With k0 > 0 the sea
// occupies an excited ladder, so ||g - gamma|| stays O(1).
struct SeaPair {
  DensityMatrix g;
  DensityMatrix gamma;
  Mat p_plus_g, p_minus_g;
};
SeaPair excited_sea_pair(const ModelSpace& m, const PhysParams& p, int k0,
                         const SolveOptions& opts);

// Random pair: g drawn in coordinate space from fixed seeds (comparable
// across sweep points), gamma a compression of a second draw into the
// electronic block of g's mean field.
SeaPair random_sea_pair(const ModelSpace& m, const PhysParams& p,
                        std::uint64_t seed, double trace_scale = 1.0);

// Censor y-values at-or-below their floors, then fit log-log.
SlopeFit censored_fit(const std::vector<double>& xs,
                      const std::vector<double>& ys,
                      const std::vector<double>& floors);

struct CsvTable {
  std::string header;
  std::vector<std::string> rows;
  std::string str() const;
};

std::string num(double v);

}  // namespace dflab::detail
