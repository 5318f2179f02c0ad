#pragma once

// Run configuration: plain sectioned key = value text. Unknown sections or
// keys are rejected with their line number; all randomness downstream flows
// from the single [output] seed.

#include <cstdint>
#include <string>
#include <vector>

#include "dflab/model.hpp"
#include "dflab/params.hpp"
#include "dflab/solvers.hpp"

namespace dflab {

struct SweepSpec {
  enum class Vary { c, alpha };
  Vary vary = Vary::c;
  std::vector<double> values;
};

struct VerifyConfig {
  std::vector<std::string> claims;  // empty means all
  int sample_size = 200;
  double c_min_filled = 0.0;  // 0 means the largest sweep value
};

struct RunConfig {
  ModelConfig model;
  PhysParams phys;
  SolveOptions solver;
  SweepSpec sweep;
  bool has_sweep = false;
  VerifyConfig verify;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  int workers = 1;
  bool model_seed_pinned = false;  // [model] seed was given explicitly

  // The validated, resolved form echoed into every report.
  std::string echo() const;
};

// Parse + validate; throws ConfigError with a line-numbered message.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace dflab
