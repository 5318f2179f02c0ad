#include "dflab/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace dflab {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(int line, const std::string& v) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in number '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "expected a number, got '" + v + "'");
  }
}

long parse_int(int line, const std::string& v) {
  try {
    size_t pos = 0;
    long n = std::stol(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in integer '" + v + "'");
    return n;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "expected an integer, got '" + v + "'");
  }
}

bool parse_bool(int line, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(line, "expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  bool model_seed_set = false;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "phys" && section != "solver" &&
          section != "sweep" && section != "verify" && section != "output")
        fail(line_no, "unknown section [" + section + "]");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (section.empty()) fail(line_no, "key outside any section");
    if (key.empty()) fail(line_no, "empty key");

    if (section == "model") {
      if (key == "backend") {
        if (val == "dirac1d")
          cfg.model.backend = Backend::dirac1d;
        else if (val == "synthetic")
          cfg.model.backend = Backend::synthetic;
        else
          fail(line_no, "backend must be dirac1d or synthetic");
      } else if (key == "n")
        cfg.model.n_grid = static_cast<int>(parse_int(line_no, val));
      else if (key == "box_len")
        cfg.model.box_len = parse_double(line_no, val);
      else if (key == "soften")
        cfg.model.soften = parse_double(line_no, val);
      else if (key == "seed") {
        cfg.model.seed = static_cast<std::uint64_t>(parse_int(line_no, val));
        model_seed_set = true;
      } else if (key == "synth_dim")
        cfg.model.synth_dim = static_cast<int>(parse_int(line_no, val));
      else if (key == "synth_gap")
        cfg.model.synth_gap = parse_double(line_no, val);
      else if (key == "synth_symmetric")
        cfg.model.synth_symmetric = parse_bool(line_no, val);
      else
        fail(line_no, "unknown key '" + key + "' in [model]");
    } else if (section == "phys") {
      if (key == "alpha")
        cfg.phys.alpha = parse_double(line_no, val);
      else if (key == "c")
        cfg.phys.c = parse_double(line_no, val);
      else if (key == "z")
        cfg.phys.Z = parse_double(line_no, val);
      else if (key == "q")
        cfg.phys.q = static_cast<int>(parse_int(line_no, val));
      else
        fail(line_no, "unknown key '" + key + "' in [phys]");
    } else if (section == "solver") {
      if (key == "tol")
        cfg.solver.tol = parse_double(line_no, val);
      else if (key == "max_iter")
        cfg.solver.max_iter = static_cast<int>(parse_int(line_no, val));
      else if (key == "strategy") {
        if (val == "aufbau")
          cfg.solver.strategy = DfStrategy::aufbau;
        else if (val == "gradient")
          cfg.solver.strategy = DfStrategy::gradient;
        else
          fail(line_no, "strategy must be aufbau or gradient");
      } else if (key == "retract_tol")
        cfg.solver.retract.tol_fixed = parse_double(line_no, val);
      else if (key == "retract_max_iter")
        cfg.solver.retract.max_iter =
            static_cast<int>(parse_int(line_no, val));
      else if (key == "radius")
        cfg.solver.radius = parse_double(line_no, val);
      else if (key == "occ_tol")
        cfg.solver.occ_tol = parse_double(line_no, val);
      else if (key == "filled_tol")
        cfg.solver.filled_tol = parse_double(line_no, val);
      else if (key == "ephf_full_set")
        cfg.solver.ephf_full_set = parse_bool(line_no, val);
      else if (key == "max_outer")
        cfg.solver.max_outer = static_cast<int>(parse_int(line_no, val));
      else if (key == "sea") {
        if (val == "df")
          cfg.solver.sea_start = SeaStart::df_minimizer;
        else if (val == "free")
          cfg.solver.sea_start = SeaStart::free_sea;
        else
          fail(line_no, "sea must be df or free");
      } else if (key == "grad_step")
        cfg.solver.grad_step = parse_double(line_no, val);
      else
        fail(line_no, "unknown key '" + key + "' in [solver]");
    } else if (section == "sweep") {
      cfg.has_sweep = true;
      if (key == "vary") {
        if (val == "c")
          cfg.sweep.vary = SweepSpec::Vary::c;
        else if (val == "alpha")
          cfg.sweep.vary = SweepSpec::Vary::alpha;
        else
          fail(line_no, "vary must be c or alpha");
      } else if (key == "values") {
        cfg.sweep.values.clear();
        for (const auto& item : split_list(val))
          cfg.sweep.values.push_back(parse_double(line_no, item));
        if (cfg.sweep.values.empty()) fail(line_no, "empty sweep values");
        for (double v : cfg.sweep.values)
          if (!(v > 0.0)) fail(line_no, "sweep values must be > 0");
      } else
        fail(line_no, "unknown key '" + key + "' in [sweep]");
    } else if (section == "verify") {
      if (key == "claims") {
        cfg.verify.claims.clear();
        if (val != "all")
          for (const auto& item : split_list(val))
            cfg.verify.claims.push_back(item);
      } else if (key == "sample_size")
        cfg.verify.sample_size = static_cast<int>(parse_int(line_no, val));
      else if (key == "c_min_filled")
        cfg.verify.c_min_filled = parse_double(line_no, val);
      else
        fail(line_no, "unknown key '" + key + "' in [verify]");
    } else if (section == "output") {
      if (key == "dir")
        cfg.output_dir = val;
      else if (key == "seed")
        cfg.seed = static_cast<std::uint64_t>(parse_int(line_no, val));
      else if (key == "workers")
        cfg.workers = static_cast<int>(parse_int(line_no, val));
      else
        fail(line_no, "unknown key '" + key + "' in [output]");
    }
  }

  cfg.model_seed_pinned = model_seed_set;
  if (!model_seed_set) cfg.model.seed = cfg.seed;
  try {
    cfg.model.validate();
    cfg.phys.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config validation: ") + e.what());
  }
  if (cfg.workers < 1) throw ConfigError("config validation: workers >= 1");
  if (cfg.verify.sample_size < 1)
    throw ConfigError("config validation: sample_size >= 1");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

std::string RunConfig::echo() const {
  std::ostringstream o;
  o.precision(17);
  o << "[model]\n";
  o << "backend = "
    << (model.backend == Backend::dirac1d ? "dirac1d" : "synthetic") << "\n";
  o << "n = " << model.n_grid << "\n";
  o << "box_len = " << model.box_len << "\n";
  o << "soften = " << model.soften << "\n";
  o << "seed = " << model.seed << "\n";
  o << "synth_dim = " << model.synth_dim << "\n";
  o << "synth_gap = " << model.synth_gap << "\n";
  o << "synth_symmetric = " << (model.synth_symmetric ? "true" : "false")
    << "\n";
  o << "[phys]\n";
  o << "alpha = " << phys.alpha << "\n";
  o << "c = " << phys.c << "\n";
  o << "z = " << phys.Z << "\n";
  o << "q = " << phys.q << "\n";
  o << "[solver]\n";
  o << "tol = " << solver.tol << "\n";
  o << "max_iter = " << solver.max_iter << "\n";
  o << "strategy = "
    << (solver.strategy == DfStrategy::aufbau ? "aufbau" : "gradient")
    << "\n";
  o << "retract_tol = " << solver.retract.tol_fixed << "\n";
  o << "retract_max_iter = " << solver.retract.max_iter << "\n";
  o << "radius = " << solver.radius << "\n";
  o << "occ_tol = " << solver.occ_tol << "\n";
  o << "filled_tol = " << solver.filled_tol << "\n";
  o << "ephf_full_set = " << (solver.ephf_full_set ? "true" : "false") << "\n";
  o << "max_outer = " << solver.max_outer << "\n";
  o << "sea = "
    << (solver.sea_start == SeaStart::df_minimizer ? "df" : "free") << "\n";
  o << "grad_step = " << solver.grad_step << "\n";
  if (has_sweep) {
    o << "[sweep]\n";
    o << "vary = " << (sweep.vary == SweepSpec::Vary::c ? "c" : "alpha")
      << "\n";
    o << "values = ";
    for (size_t i = 0; i < sweep.values.size(); ++i)
      o << (i ? ", " : "") << sweep.values[i];
    o << "\n";
  }
  o << "[verify]\n";
  o << "claims = ";
  if (verify.claims.empty())
    o << "all";
  else
    for (size_t i = 0; i < verify.claims.size(); ++i)
      o << (i ? ", " : "") << verify.claims[i];
  o << "\n";
  o << "sample_size = " << verify.sample_size << "\n";
  o << "c_min_filled = " << verify.c_min_filled << "\n";
  o << "[output]\n";
  o << "dir = " << output_dir << "\n";
  o << "seed = " << seed << "\n";
  o << "workers = " << workers << "\n";
  return o.str();
}

}  // namespace dflab
