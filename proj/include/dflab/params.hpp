#pragma once

// Scalar physical parameters and the derived dimensionless constants that
// control the retraction and the admissibility of both mean-field models.
// Everything here is a pure function of (alpha, c, Z, q) and the retraction
// radius R; identical inputs give bit-identical outputs.

#include <string>

#include "dflab/errors.hpp"

namespace dflab {

struct PhysParams {
  double alpha = 0.0;  // electron-electron coupling, >= 0
  double c = 1.0;      // speed of light in model units, > 0
  double Z = 0.0;      // total nuclear charge, >= 0
  int q = 1;           // electron count, >= 1

  double alpha_c() const { return alpha / c; }
  double z_c() const { return Z / c; }

  // Throws DomainError when a field is out of range.
  void validate() const;
};

struct DerivedConstants {
  double kappa = 0.0;     // 2(alpha_c q + Z_c)
  double lambda0 = 0.0;   // 1 - max(alpha_c q, Z_c)
  double a_const = 0.0;   // pi alpha_c / (4 sqrt((1-kappa) lambda0)); NaN if undefined
  double R = 0.0;         // retraction radius used for the A and L constants
  double A_const = 0.0;   // max(1/(1-2aR), (2+aq)/2)
  double L_const = 0.0;   // contraction bound 2 a R
  double C_kl = 0.0;      // 5 pi^2 / (4 (1-kappa)^2 lambda0^{3/2} (1-L)^2)
  bool kappa_ok = false;        // kappa < 1
  bool lambda0_ok = false;      // lambda0 > 0
  bool contraction_ok = false;  // L_const < 1

  // a_const with the domain guard: throws DomainError when 1-kappa <= 0 or
  // lambda0 <= 0 (the square root would leave the reals).
  double a_checked() const;
};

DerivedConstants derive_constants(const PhysParams& p, double R);

struct AssumptionReport {
  bool item1 = false;  // kappa < 1 - (pi/4) alpha_c q
  bool item2 = false;  // R inside the open admissible interval
  bool ok = false;
  double r_lower = 0.0;  // (1 - kappa - (pi/4) alpha_c q)^{-1/2} q
  double r_upper = 0.0;  // 2 sqrt((1-kappa) lambda0) / (pi alpha_c); inf at alpha=0
  std::string reason;
};

// Both items of the ground-state existence assumption for this R. Never
// throws: failures come back as ok=false with the interval endpoints.
AssumptionReport check_assumption_1(const DerivedConstants& d,
                                    const PhysParams& p, double R);

// C_a = (1/3)(-4|a| + sqrt(9+4a^2)), positive for |a| < sqrt(3)/2.
double c_a_of(double a);

// Largest mu in [0, C_a^2] with mu + C_a^2 a^2/(C_a^2 - mu) <= 1, in closed
// form (smaller root of the binding quadratic). Throws DomainError outside
// |a| < sqrt(3)/2.
double mu_of(double a);

// Admissibility of the electron-positron model for a sea of trace trace_g:
// pi alpha_c (1/4 + max(trace_g, q)) + 4 alpha_c trace_g < mu_{Z_c}.
// Throws DomainError when Z_c >= sqrt(3)/2.
bool check_ephf_condition(const PhysParams& p, double trace_g);

}  // namespace dflab
