#pragma once

// Ground-state solvers: DF minimization over Gamma_q^+ (Aufbau SCF and a
// retracted projected-gradient variant), electron-positron HF minimization
// for a fixed sea, and the max-min outer loop over seas.

#include <optional>
#include <string>
#include <vector>

#include "dflab/density.hpp"
#include "dflab/meanfield.hpp"
#include "dflab/params.hpp"
#include "dflab/retraction.hpp"

namespace dflab {

enum class DfStrategy { aufbau, gradient };
enum class SeaStart { df_minimizer, free_sea };

struct SolveOptions {
  double tol = 1e-10;        // self-consistency residual, operator norm
  int max_iter = 200;
  DfStrategy strategy = DfStrategy::aufbau;
  RetractOptions retract;
  double radius = -1.0;      // retraction radius; <0 means 2(1+K^2)q
  double occ_tol = 1e-6;     // occupations within occ_tol of {0,1} count
                             // as filled
  double filled_tol = 1e-7;  // ||g - 1_(0,nu]|| threshold for filled_shell
  bool ephf_full_set = false;  // projected-gradient over the full block set
  int max_outer = 30;          // max-min outer iterations
  SeaStart sea_start = SeaStart::df_minimizer;
  double grad_step = 1.0;      // initial projected-gradient step
};

struct SolveReport {
  bool converged = false;
  double energy = 0.0;  // rest-mass subtracted
  DensityMatrix gamma;
  RVec occupations;          // eigenvalues of gamma, ascending
  double nu_shifted = 0.0;   // Fermi level as eps_F - c^2
  bool filled_shell = false;
  double filled_shell_residual = 0.0;
  bool purely_electronic = true;  // ep-HF: P+ g P+ == g within tol
  int iterations = 0;
  std::vector<double> residual_history;
  std::vector<double> energy_history;  // accepted-step energies
  double final_residual = 0.0;
  double trace = 0.0;
  double orbital_residual_max = 0.0;  // max_j ||(D - eps_j) u_j||
  bool level_crossing_flag = false;
  std::string strategy_name;
  DerivedConstants consts;
  AssumptionReport assumption;
  bool ephf_condition_ok = true;
  URCertificate ur;
};

// DF ground state over Gamma_q^+. Requires q <= dim/4. Throws
// ConvergenceError / GapCollapseError on failure.
SolveReport solve_df(const ModelSpace& m, const PhysParams& p,
                     const SolveOptions& opts = {});

// ep-HF ground state for the fixed sea (p_plus_g, p_minus_g). trace_g is
// the trace of the sea-defining state, used only for the admissibility
// stamp (pass <0 to stamp with q).
SolveReport solve_ephf(const Mat& p_plus_g, const Mat& p_minus_g,
                       const ModelSpace& m, const PhysParams& p,
                       const SolveOptions& opts = {}, double trace_g = -1.0);

struct MittlemanStep {
  int k = 0;
  double e = 0.0;       // ep-HF energy in sea g_k
  double trace_g = 0.0;
  bool purely_electronic = true;
};

struct MittlemanResult {
  double e_q_estimate = 0.0;  // max over the trajectory; a lower estimate
                              // of the sup, never claimed attained
  std::vector<MittlemanStep> trajectory;
  bool converged = false;
  SolveReport df;          // the DF solve that seeded the loop
  SolveReport last_ephf;
};

MittlemanResult mittleman(const ModelSpace& m, const PhysParams& p,
                          const SolveOptions& opts = {});

struct ShellSwap {
  Mat h;  // |psi_a><psi_a| - |psi_b><psi_b|
  int a_idx = 0, b_idx = 0;  // indices within the Fermi shell
  double mu_a = 0.0, mu_b = 0.0;
  double t_max = 0.0;  // admissible step range (0, t_max]
};

// Swap direction inside a fractionally occupied Fermi shell of the
// reported minimizer; nullopt for a closed shell.
std::optional<ShellSwap> shell_swap_direction(const SolveReport& rep,
                                              const ModelSpace& m,
                                              const PhysParams& p);

}  // namespace dflab
