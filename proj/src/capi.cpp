#include "dflab.h"

#include <cstdlib>
#include <string>

#include "dflab/config.hpp"
#include "dflab/runner.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

}  // namespace

struct dflab_run {
  dflab::RunConfig cfg;
};

struct dflab_result {
  std::string json;
  int exit_code = 0;
  std::vector<std::string> files;
};

extern "C" {

const char* dflab_version(void) { return "1.0.0"; }

dflab_status dflab_run_open(const char* config_path, dflab_run** out) {
  if (!config_path || !out) {
    set_error("null argument");
    return DFLAB_ERR_ARG;
  }
  *out = nullptr;
  try {
    auto run = new dflab_run{dflab::parse_config_file(config_path)};
    // The OUTPUT_DIR environment override is the only one honored.
    if (const char* env = std::getenv("OUTPUT_DIR"))
      run->cfg.output_dir = env;
    *out = run;
    return DFLAB_OK;
  } catch (const dflab::ConfigError& e) {
    set_error(e.what());
    return DFLAB_ERR_CONFIG;
  } catch (const std::exception& e) {
    set_error(e.what());
    return DFLAB_ERR_INTERNAL;
  }
}

dflab_status dflab_run_open_string(const char* config_text, dflab_run** out) {
  if (!config_text || !out) {
    set_error("null argument");
    return DFLAB_ERR_ARG;
  }
  *out = nullptr;
  try {
    auto run = new dflab_run{dflab::parse_config_text(config_text)};
    if (const char* env = std::getenv("OUTPUT_DIR"))
      run->cfg.output_dir = env;
    *out = run;
    return DFLAB_OK;
  } catch (const dflab::ConfigError& e) {
    set_error(e.what());
    return DFLAB_ERR_CONFIG;
  } catch (const std::exception& e) {
    set_error(e.what());
    return DFLAB_ERR_INTERNAL;
  }
}

void dflab_run_close(dflab_run* run) { delete run; }

dflab_status dflab_run_set_option(dflab_run* run, const char* key,
                                  const char* value) {
  if (!run || !key || !value) {
    set_error("null argument");
    return DFLAB_ERR_ARG;
  }
  std::string k(key), v(value);
  try {
    if (k == "output.dir") {
      run->cfg.output_dir = v;
    } else if (k == "output.seed") {
      run->cfg.seed = std::stoull(v);
      if (!run->cfg.model_seed_pinned) run->cfg.model.seed = run->cfg.seed;
    } else if (k == "output.workers") {
      int w = std::stoi(v);
      if (w < 1) {
        set_error("workers must be >= 1");
        return DFLAB_ERR_ARG;
      }
      run->cfg.workers = w;
    } else if (k == "verify.claims") {
      run->cfg.verify.claims.clear();
      if (v != "all") {
        std::string item;
        for (char ch : v + ",") {
          if (ch == ',') {
            if (!item.empty()) run->cfg.verify.claims.push_back(item);
            item.clear();
          } else if (ch != ' ') {
            item += ch;
          }
        }
      }
    } else {
      set_error("unknown option: " + k);
      return DFLAB_ERR_ARG;
    }
    return DFLAB_OK;
  } catch (const std::exception& e) {
    set_error(e.what());
    return DFLAB_ERR_ARG;
  }
}

dflab_status dflab_run_execute(dflab_run* run, const char* command,
                               dflab_result** out) {
  if (!run || !command || !out) {
    set_error("null argument");
    return DFLAB_ERR_ARG;
  }
  *out = nullptr;
  try {
    dflab::CommandOutcome oc = dflab::run_command(run->cfg, command);
    auto res = new dflab_result;
    res->json = oc.report.dump(2);
    res->exit_code = oc.exit_code;
    res->files = oc.files_written;
    *out = res;
    return DFLAB_OK;
  } catch (const dflab::ConfigError& e) {
    set_error(e.what());
    return DFLAB_ERR_CONFIG;
  } catch (const std::exception& e) {
    set_error(e.what());
    return DFLAB_ERR_NUMERIC;
  }
}

const char* dflab_result_json(const dflab_result* res) {
  return res ? res->json.c_str() : "";
}

int dflab_result_exit_code(const dflab_result* res) {
  return res ? res->exit_code : DFLAB_ERR_ARG;
}

int dflab_result_file_count(const dflab_result* res) {
  return res ? static_cast<int>(res->files.size()) : 0;
}

const char* dflab_result_file(const dflab_result* res, int i) {
  if (!res || i < 0 || i >= static_cast<int>(res->files.size())) return "";
  return res->files[static_cast<size_t>(i)].c_str();
}

void dflab_result_close(dflab_result* res) { delete res; }

const char* dflab_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
