#pragma once

// Deterministic random sources and density-matrix samplers used by the
// synthetic backend, the verification harness and the tests. Gaussian and
// uniform variates are generated by hand from mt19937_64 output so that a
// given seed reproduces the same stream on every standard library.

#include <cstdint>
#include <random>

#include "dflab/linalg.hpp"

namespace dflab {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0,1) built from the top 53 bits.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Marsaglia polar method; consumes a variable number of uniforms but the
  // stream is still fully determined by the seed.
  double gaussian();

  Complex cgaussian() {
    double re = gaussian();
    double im = gaussian();
    return Complex(re, im) / std::sqrt(2.0);
  }

  std::uint64_t raw() { return eng_(); }

  // Derive an independent child stream; used to give sweep points and
  // samples decorrelated but reproducible seeds.
  std::uint64_t fork() { return eng_() ^ 0x9e3779b97f4a7c15ULL; }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// dim x dim matrix with independent standard complex Gaussian entries.
Mat random_matrix(Rng& rng, int dim);

// Random Hermitian matrix, entries O(1).
Mat random_hermitian(Rng& rng, int dim);

// Haar-like unitary from the QR decomposition of a complex Gaussian matrix,
// with the phase convention that makes it unique (positive R diagonal).
Mat random_unitary(Rng& rng, int dim);

// Random rank-k orthogonal projector.
Mat random_projector(Rng& rng, int dim, int k);

// Random member of Gamma_q: Hermitian with eigenvalues clamped to [0,1] and
// trace scaled down to q when it overshoots. `spread` scales the raw
// Hermitian before clamping, controlling how many eigenvalues saturate.
Mat sample_gamma_q(Rng& rng, int dim, double q, double spread = 0.6);

}  // namespace dflab
