#include "dflab/model.hpp"

#include <cmath>
#include <numbers>

#include "dflab/sampling.hpp"

namespace dflab {

namespace {
constexpr double kPi = std::numbers::pi;

// Standard FFT frequency layout: j -> j for j < (N+1)/2, else j - N.
int fft_mode(int j, int n) { return j < (n + 1) / 2 ? j : j - n; }

Mat fourier_frame(int n) {
  Mat f(n, n);
  const double s = 1.0 / std::sqrt(double(n));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double phase = -2.0 * kPi * double(j) * double(k) / double(n);
      f(j, k) = Complex(std::cos(phase), std::sin(phase)) * s;
    }
  return f;
}

// d_free = B (x) s1 + c^2 I (x) s3 with B = U^H diag(t) U, spatial-major
// spinor-minor. The shifted variant replaces s3 by diag(0,-2), which is
// exact: no c^2 cancellation ever happens in assembled matrices.
void assemble_dirac(ModelSpace& m) {
  const int n = m.n_grid;
  Mat b = m.u_space.adjoint() * m.kin_symbol.asDiagonal() * m.u_space;
  b = hermitian_part(b);
  const double c2 = m.c * m.c;
  m.d_free = Mat::Zero(m.dim, m.dim);
  m.d_free_shifted = Mat::Zero(m.dim, m.dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m.d_free(2 * i, 2 * j + 1) = b(i, j);
      m.d_free(2 * i + 1, 2 * j) = b(i, j);
      m.d_free_shifted(2 * i, 2 * j + 1) = b(i, j);
      m.d_free_shifted(2 * i + 1, 2 * j) = b(i, j);
    }
    m.d_free(2 * i, 2 * i) += c2;
    m.d_free(2 * i + 1, 2 * i + 1) -= c2;
    m.d_free_shifted(2 * i + 1, 2 * i + 1) -= 2.0 * c2;
  }
}

void finalize(ModelSpace& m) {
  m.beta_diag = RVec(m.dim);
  for (int i = 0; i < m.n_grid; ++i) {
    m.beta_diag[2 * i] = 1.0;
    m.beta_diag[2 * i + 1] = -1.0;
  }
  m.v_mat = Mat::Zero(m.dim, m.dim);
  for (int i = 0; i < m.n_grid; ++i) {
    m.v_mat(2 * i, 2 * i) = m.v_diag[i];
    m.v_mat(2 * i + 1, 2 * i + 1) = m.v_diag[i];
  }
  m.lap_eigs = (m.kin_symbol / m.c).cwiseAbs2();

  // Interaction kernel must be positive semidefinite; the softened
  // min-image kernel and the Gram constructions satisfy this with margin.
  Eigen::SelfAdjointEigenSolver<RMat> wes(m.w_kernel,
                                          Eigen::EigenvaluesOnly);
  double wmin = wes.eigenvalues().minCoeff();
  double wmax = wes.eigenvalues().maxCoeff();
  if (wmin < -1e-10 * std::max(wmax, 1.0))
    throw ConfigError("interaction kernel is not positive semidefinite");

  // |D|^{1/2} through the eigendecomposition of d_free itself.
  Eigen::SelfAdjointEigenSolver<Mat> es(m.d_free);
  RVec root = es.eigenvalues().cwiseAbs().cwiseSqrt();
  m.sqrt_abs_d =
      es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
  m.sqrt_abs_d = hermitian_part(m.sqrt_abs_d);

  RVec xq = (RVec::Ones(m.n_grid) + m.lap_eigs).array().pow(0.25);
  RVec yh = (RVec::Ones(m.n_grid) + m.lap_eigs).array().sqrt();
  m.x_quarter = m.lift(m.spatial_op(xq));
  m.y_half = m.lift(m.spatial_op(yh));
}

ModelSpace build_dirac1d(const ModelConfig& cfg, const PhysParams& p) {
  ModelSpace m;
  m.cfg = cfg;
  m.c = p.c;
  m.Z = p.Z;
  m.n_grid = cfg.n_grid;
  m.dim = 2 * m.n_grid;
  m.box_len = cfg.box_len;
  m.dx = cfg.box_len / m.n_grid;
  const double a_soft = cfg.soften > 0.0 ? cfg.soften : m.dx;

  m.grid = RVec(m.n_grid);
  for (int i = 0; i < m.n_grid; ++i) m.grid[i] = i * m.dx;

  m.kin_symbol = RVec(m.n_grid);
  for (int j = 0; j < m.n_grid; ++j)
    m.kin_symbol[j] = p.c * 2.0 * kPi * fft_mode(j, m.n_grid) / m.box_len;
  m.u_space = fourier_frame(m.n_grid);

  auto min_image = [&](double r) {
    r = std::abs(r);
    r = std::fmod(r, m.box_len);
    return std::min(r, m.box_len - r);
  };
  auto w = [&](double r) { return 1.0 / std::sqrt(r * r + a_soft * a_soft); };

  const double x_nuc = m.grid[m.n_grid / 2];
  m.v_diag = RVec(m.n_grid);
  for (int i = 0; i < m.n_grid; ++i)
    m.v_diag[i] = p.Z * w(min_image(m.grid[i] - x_nuc));

  // The pair kernel is the circulant built from the min-image samples.
  // Once the grid resolves the wrap-around cusp at L/2 its symbol develops
  // a tiny signed tail, so negative symbol values are clamped to zero: a
  // no-op at the default a_soft = dx and otherwise the positive part of
  // the same interaction (positive definiteness is required by the
  // exchange-sign structure).
  const int n = m.n_grid;
  RVec row(n);
  for (int j = 0; j < n; ++j) row[j] = w(min_image(j * m.dx));
  RVec symbol = RVec::Zero(n);
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      acc += row[j] * std::cos(2.0 * kPi * j * k / n);
    symbol[k] = std::max(acc, 0.0);
  }
  RVec row_psd = RVec::Zero(n);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k)
      acc += symbol[k] * std::cos(2.0 * kPi * j * k / n);
    row_psd[j] = acc / n;
  }
  m.w_kernel = RMat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.w_kernel(i, j) = row_psd[std::abs(i - j)];

  assemble_dirac(m);
  finalize(m);
  return m;
}

ModelSpace build_synthetic(const ModelConfig& cfg, const PhysParams& p) {
  ModelSpace m;
  m.cfg = cfg;
  m.c = p.c;
  m.Z = p.Z;
  m.n_grid = cfg.synth_dim / 2;
  m.dim = cfg.synth_dim;
  m.box_len = m.n_grid;
  m.dx = 1.0;
  m.grid = RVec::LinSpaced(m.n_grid, 0.0, m.n_grid - 1.0);

  Rng rng(cfg.seed);
  const int n = m.n_grid;
  const double scale = cfg.synth_gap > 0.0 ? cfg.synth_gap : p.c * p.c;

  m.kin_symbol = RVec::Zero(n);
  if (cfg.synth_symmetric) {
    // Ring instance: Fourier frame, odd kinetic symbol (so +-k shells are
    // exactly degenerate), circulant kernel from a positive symbol,
    // constant attraction.
    m.u_space = fourier_frame(n);
    for (int j = 1; j <= (n - 1) / 2; ++j) {
      double mag = rng.uniform(0.2, 1.0) * scale;
      m.kin_symbol[j] = mag;
      m.kin_symbol[n - j] = -mag;
    }
    // The symbol decays away from zero momentum, like a softened Coulomb
    // transform; the zero mode strictly dominates so exchange integrals
    // keep the sign of the continuum kernel.
    RVec symbol(n);
    for (int mset = 0; mset <= n / 2; ++mset) {
      double s = rng.uniform(0.8, 1.0) *
                 std::pow(0.6, std::min(mset, n - mset));
      symbol[mset] = s;
      if (mset > 0 && mset < n - mset) symbol[n - mset] = s;
    }
    RVec row(n);
    for (int r = 0; r < n; ++r) {
      double acc = 0.0;
      for (int ms = 0; ms < n; ++ms)
        acc += symbol[ms] * std::cos(2.0 * kPi * ms * r / n);
      row[r] = acc / n;
    }
    m.w_kernel = RMat(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m.w_kernel(i, j) = row[(i - j + n) % n];
    m.v_diag = RVec::Constant(n, p.Z * m.w_kernel(0, 0));
  } else {
    for (int j = 0; j < n; ++j) m.kin_symbol[j] = rng.uniform(0.0, scale);
    m.u_space = random_unitary(rng, n);
    RMat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.gaussian();
    m.w_kernel = (a.transpose() * a) / n;
    m.w_kernel = 0.5 * (m.w_kernel + m.w_kernel.transpose()).eval();
    // ||V|| pinned to Z times the measured kernel peak, mirroring
    // ||V|| = Z w(0) on the grid backend.
    double peak = m.w_kernel.diagonal().maxCoeff();
    m.v_diag = RVec(n);
    for (int i = 0; i < n; ++i) m.v_diag[i] = rng.uniform(0.5, 1.0);
    double vmax = m.v_diag.maxCoeff();
    m.v_diag *= vmax > 0.0 ? p.Z * peak / vmax : 0.0;
  }

  assemble_dirac(m);
  finalize(m);
  return m;
}

}  // namespace

void ModelConfig::validate() const {
  switch (backend) {
    case Backend::dirac1d:
      if (n_grid < 8) throw ConfigError("dirac1d needs n_grid >= 8");
      if (!(box_len > 0.0)) throw ConfigError("box_len must be > 0");
      if (soften < 0.0) throw ConfigError("soften must be >= 0");
      break;
    case Backend::synthetic:
      if (synth_dim < 4 || synth_dim % 2 != 0)
        throw ConfigError("synth_dim must be even and >= 4");
      if (synth_gap < 0.0) throw ConfigError("synth_gap must be >= 0");
      break;
    default:
      throw ConfigError("unknown backend");
  }
}

Mat ModelSpace::beta_mat() const {
  Mat b = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) b(i, i) = beta_diag[i];
  return b;
}

Mat ModelSpace::spatial_op(const RVec& multiplier) const {
  return hermitian_part(u_space.adjoint() * multiplier.asDiagonal() *
                        u_space);
}

Mat ModelSpace::lift(const Mat& spatial) const {
  Mat full = Mat::Zero(dim, dim);
  for (int i = 0; i < n_grid; ++i)
    for (int j = 0; j < n_grid; ++j) {
      full(2 * i, 2 * j) = spatial(i, j);
      full(2 * i + 1, 2 * j + 1) = spatial(i, j);
    }
  return full;
}

ModelSpace build_model(const ModelConfig& cfg, const PhysParams& p) {
  cfg.validate();
  p.validate();
  return cfg.backend == Backend::dirac1d ? build_dirac1d(cfg, p)
                                         : build_synthetic(cfg, p);
}

std::pair<Mat, Mat> free_projectors(const ModelSpace& m) {
  const double c2 = m.c * m.c;
  Eigen::SelfAdjointEigenSolver<Mat> es(m.d_free_shifted);
  Mat plus = Mat::Zero(m.dim, m.dim);
  Mat minus = Mat::Zero(m.dim, m.dim);
  for (int j = 0; j < m.dim; ++j) {
    double ev = es.eigenvalues()[j] + c2;
    if (std::abs(ev) < 1e-8 * c2)
      throw GapCollapseError("free operator eigenvalue inside the gap guard");
    Mat proj = es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint();
    (ev > 0.0 ? plus : minus) += proj;
  }
  return {hermitian_part(plus), hermitian_part(minus)};
}

Mat op_power(const ModelSpace& m, OpKind which, double s) {
  const bool fractional = s != std::floor(s);
  if (which == OpKind::abs_d) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m.d_free);
    RVec a = es.eigenvalues().cwiseAbs();
    if (fractional && a.minCoeff() <= 0.0)
      throw DomainError("op_power: nonpositive spectrum with fractional s");
    RVec powed = a.array().pow(s);
    return hermitian_part(es.eigenvectors() * powed.asDiagonal() *
                          es.eigenvectors().adjoint());
  }
  const double c2 = m.c * m.c;
  RVec base = which == OpKind::one_minus_lap
                  ? (RVec::Ones(m.n_grid) + m.lap_eigs).eval()
                  : (RVec::Constant(m.n_grid, c2 * c2) + c2 * m.lap_eigs)
                        .eval();
  if (fractional && base.minCoeff() <= 0.0)
    throw DomainError("op_power: nonpositive spectrum with fractional s");
  RVec powed = base.array().pow(s);
  return m.lift(m.spatial_op(powed));
}

}  // namespace dflab
