#include "dflab/params.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace dflab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSqrt3Half = 0.8660254037844386;  // sqrt(3)/2
}  // namespace

void PhysParams::validate() const {
  if (!(alpha >= 0.0)) throw DomainError("alpha must be >= 0");
  if (!(c > 0.0)) throw DomainError("c must be > 0");
  if (!(Z >= 0.0)) throw DomainError("Z must be >= 0");
  if (q < 1) throw DomainError("q must be a positive integer");
}

double DerivedConstants::a_checked() const {
  if (!kappa_ok || !lambda0_ok)
    throw DomainError("a(alpha,c) undefined: needs kappa < 1 and lambda0 > 0");
  return a_const;
}

DerivedConstants derive_constants(const PhysParams& p, double R) {
  p.validate();
  if (!(R > 0.0)) throw DomainError("retraction radius R must be > 0");
  DerivedConstants d;
  const double ac = p.alpha_c();
  const double zc = p.z_c();
  d.kappa = 2.0 * (ac * p.q + zc);
  d.lambda0 = 1.0 - std::max(ac * p.q, zc);
  d.R = R;
  d.kappa_ok = d.kappa < 1.0;
  d.lambda0_ok = d.lambda0 > 0.0;
  if (d.kappa_ok && d.lambda0_ok) {
    d.a_const = kPi * ac / (4.0 * std::sqrt((1.0 - d.kappa) * d.lambda0));
    d.L_const = 2.0 * d.a_const * R;
    d.contraction_ok = d.L_const < 1.0;
    double a1 = d.contraction_ok
                    ? 1.0 / (1.0 - d.L_const)
                    : std::numeric_limits<double>::infinity();
    d.A_const = std::max(a1, (2.0 + d.a_const * p.q) / 2.0);
    double one_m_l = 1.0 - d.L_const;
    d.C_kl = d.contraction_ok
                 ? 5.0 * kPi * kPi /
                       (4.0 * (1.0 - d.kappa) * (1.0 - d.kappa) *
                        std::pow(d.lambda0, 1.5) * one_m_l * one_m_l)
                 : std::numeric_limits<double>::infinity();
  } else {
    d.a_const = std::numeric_limits<double>::quiet_NaN();
    d.L_const = std::numeric_limits<double>::quiet_NaN();
    d.A_const = std::numeric_limits<double>::quiet_NaN();
    d.C_kl = std::numeric_limits<double>::quiet_NaN();
    d.contraction_ok = false;
  }
  return d;
}

AssumptionReport check_assumption_1(const DerivedConstants& d,
                                    const PhysParams& p, double R) {
  AssumptionReport rep;
  const double ac = p.alpha_c();
  const double margin = 1.0 - (kPi / 4.0) * ac * p.q;
  rep.item1 = d.kappa < margin;
  if (!rep.item1) {
    rep.reason = "item (1) violated: kappa >= 1 - (pi/4) alpha_c q";
    rep.r_lower = std::numeric_limits<double>::quiet_NaN();
    rep.r_upper = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  const double den = 1.0 - d.kappa - (kPi / 4.0) * ac * p.q;
  rep.r_lower = p.q / std::sqrt(den);
  rep.r_upper = (ac > 0.0 && d.lambda0_ok)
                    ? 2.0 * std::sqrt((1.0 - d.kappa) * d.lambda0) / (kPi * ac)
                    : std::numeric_limits<double>::infinity();
  rep.item2 = R > rep.r_lower && R < rep.r_upper;
  rep.ok = rep.item1 && rep.item2;
  if (!rep.item2)
    rep.reason = "item (2) violated: R outside the admissible interval";
  return rep;
}

double c_a_of(double a) {
  if (!(std::abs(a) < kSqrt3Half))
    throw DomainError("C_a defined only for |a| < sqrt(3)/2");
  return (-4.0 * std::abs(a) + std::sqrt(9.0 + 4.0 * a * a)) / 3.0;
}

double mu_of(double a) {
  const double ca = c_a_of(a);
  const double ca2 = ca * ca;
  if (a == 0.0) return ca2;  // constraint reads mu <= 1 with cap C_0^2 = 1
  // f(mu) = mu + ca2 a^2/(ca2-mu) is increasing on [0, ca2); the largest
  // admissible mu solves f(mu) = 1, i.e. the smaller root of
  //   mu^2 - (ca2+1) mu + ca2 (1-a^2) = 0,
  // which always lies below ca2. If even f(0) > 1 there is no positive
  // solution and the admissible set collapses to mu = 0.
  const double b = ca2 + 1.0;
  const double disc = b * b - 4.0 * ca2 * (1.0 - a * a);
  if (disc < 0.0) return 0.0;
  double mu = (b - std::sqrt(disc)) / 2.0;
  if (mu < 0.0) mu = 0.0;
  if (mu > ca2) mu = ca2;
  return mu;
}

bool check_ephf_condition(const PhysParams& p, double trace_g) {
  p.validate();
  if (!(trace_g >= 0.0)) throw DomainError("trace_g must be >= 0");
  const double zc = p.z_c();
  if (!(zc < kSqrt3Half))
    throw DomainError("ep-HF condition needs Z_c < sqrt(3)/2");
  const double ac = p.alpha_c();
  const double lhs = kPi * ac * (0.25 + std::max(trace_g, double(p.q))) +
                     4.0 * ac * trace_g;
  return lhs < mu_of(zc);
}

}  // namespace dflab
