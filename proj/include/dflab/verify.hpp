#pragma once

// Verification harness. Each claim measures a family of inequalities,
// identities or scaling laws on concrete model instances and produces a
// ClaimResult with the raw numbers, the expectation, and a pass flag.
//
// Continuum prefactors are never asserted against the discrete model;
// claims assert (a) algebraic identities exactly, (b) scaling exponents in
// alpha and c by log-log fits, and (c) inequality shapes with constants
// calibrated once per model.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "dflab/config.hpp"
#include "dflab/density.hpp"
#include "dflab/meanfield.hpp"
#include "dflab/retraction.hpp"
#include "dflab/solvers.hpp"

namespace dflab {

struct ClaimResult {
  std::string claim_id;
  bool pass = false;
  nlohmann::json measured;   // raw numbers
  nlohmann::json expected;   // slope windows / signs / orderings
  nlohmann::json tolerance;
  std::vector<std::pair<std::string, std::string>> artifacts;  // name -> csv
  std::string note;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int n_used = 0;
  int n_censored = 0;
  bool ok = false;  // enough points for a fit
};

// Least squares on (log x, log y); points with y <= floor are censored.
SlopeFit fit_loglog(const std::vector<double>& xs,
                    const std::vector<double>& ys, double floor_y);

// Constants measured once per model on a seeded calibration sample, with a
// 5% headroom; fresh samples are then asserted against them.
struct ModelCalibration {
  double c_w = 0.0;      // ||W_g|| <= c_w ||g||_X
  double c_grad = 0.0;   // ||W_g u|| <= c_grad ||g||_s1 ||(1-D)^{1/2} u||
  double c_pp = 0.0;     // |||D|^{1/2}(P+_g - P+_g')|| <= c_pp a_c ||g-g'||_X
  double c_dw = 0.0;     // ||[W_h, D_g - c^2 b]|| <= c_dw c ||h||_Y
  // Raw worst ratios against the continuum constants, recorded only.
  double raw_w_ratio = 0.0;
  double raw_grad_ratio = 0.0;
  double raw_pp_ratio = 0.0;
  double raw_dw_ratio = 0.0;
};

ModelCalibration calibrate_model(const ModelSpace& m, const PhysParams& p,
                                 std::uint64_t seed, int sample_size);

// Context shared by all claims.
struct VerifyContext {
  RunConfig cfg;
  std::uint64_t seed = 1;
};

// Individual claims (ids: projector_calculus, retraction_contract,
// second_order, error_bound, mittleman_gap, no_unfilled_shells,
// operator_inequalities, eigenfunction_bounds, fixed_point_proximity).
ClaimResult check_projector_calculus(const VerifyContext& ctx);
ClaimResult check_retraction_contract(const VerifyContext& ctx);
ClaimResult check_second_order(const VerifyContext& ctx);
ClaimResult check_error_bound(const VerifyContext& ctx);
ClaimResult check_mittleman_gap(const VerifyContext& ctx);
ClaimResult check_no_unfilled_shells(const VerifyContext& ctx);
ClaimResult check_operator_inequalities(const VerifyContext& ctx);
ClaimResult check_eigenfunction_bounds(const VerifyContext& ctx);
ClaimResult check_fixed_point_proximity(const VerifyContext& ctx);

std::vector<std::string> all_claim_ids();

// Run the named claims (all when the list is empty), in parallel over the
// configured worker count, in a deterministic merge order.
std::vector<ClaimResult> run_claims(const VerifyContext& ctx,
                                    const std::vector<std::string>& ids);

}  // namespace dflab
