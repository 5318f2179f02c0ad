#pragma once

// Report emission: JSON documents with deterministic key order and float
// formatting, CSV tables, atomic writes (write-then-rename), and the
// portable text dump format shared by models and density matrices.

#include <json.hpp>

#include <string>
#include <vector>

#include "dflab/config.hpp"
#include "dflab/density.hpp"
#include "dflab/retraction.hpp"
#include "dflab/solvers.hpp"

namespace dflab {

using Json = nlohmann::json;

// Write-then-rename; creates parent directories.
void write_file_atomic(const std::string& path, const std::string& content);

Json to_json(const PhysParams& p);
Json to_json(const DerivedConstants& d);
Json to_json(const AssumptionReport& a);
Json to_json(const URCertificate& u);
Json to_json(const RetractionTrace& t);
Json to_json(const SolveReport& r);
Json to_json(const MittlemanResult& r);
Json config_json(const RunConfig& cfg);

// Portable dump (versioned text): dimensions first, then row-major entries.
std::string dump_model(const ModelSpace& m);
std::string dump_density(const DensityMatrix& g);
DensityMatrix load_density(const std::string& text);
// Rebuild check data for a dumped model: returns the parsed matrices
// without reconstructing a full ModelSpace.
struct ModelDump {
  std::string backend;
  int n_grid = 0, n_spinor = 0, dim = 0;
  double box_len = 0.0, c = 0.0, Z = 0.0;
  Mat d_free, v_mat;
  RMat w_kernel;
};
ModelDump load_model_dump(const std::string& text);

}  // namespace dflab
