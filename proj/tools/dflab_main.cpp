// dflab command-line front end. Talks to the solver library exclusively
// through the C API in dflab.h.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dflab.h"

namespace {

struct Options {
  std::string config;
  std::string out_dir;
  std::string claims;
  long seed = -1;
  int workers = 0;
};

int run(const std::string& command, const Options& opt) {
  dflab_run* run = nullptr;
  dflab_status st = dflab_run_open(opt.config.c_str(), &run);
  if (st != DFLAB_OK) {
    std::fprintf(stderr, "dflab: %s\n", dflab_last_error());
    return st == DFLAB_ERR_CONFIG ? 2 : int(st);
  }
  if (!opt.out_dir.empty())
    dflab_run_set_option(run, "output.dir", opt.out_dir.c_str());
  if (opt.seed >= 0)
    dflab_run_set_option(run, "output.seed",
                         std::to_string(opt.seed).c_str());
  if (opt.workers > 0)
    dflab_run_set_option(run, "output.workers",
                         std::to_string(opt.workers).c_str());
  if (!opt.claims.empty())
    dflab_run_set_option(run, "verify.claims", opt.claims.c_str());

  dflab_result* res = nullptr;
  st = dflab_run_execute(run, command.c_str(), &res);
  if (st != DFLAB_OK) {
    std::fprintf(stderr, "dflab %s: %s\n", command.c_str(),
                 dflab_last_error());
    dflab_run_close(run);
    return st == DFLAB_ERR_CONFIG ? 2 : 3;
  }
  int code = dflab_result_exit_code(res);
  int n = dflab_result_file_count(res);
  for (int i = 0; i < n; ++i)
    std::printf("wrote %s\n", dflab_result_file(res, i));
  if (code == 0)
    std::printf("%s: ok\n", command.c_str());
  else
    std::printf("%s: finished with exit code %d (see report)\n",
                command.c_str(), code);
  dflab_result_close(res);
  dflab_run_close(run);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dflab: Dirac-Fock / electron-positron Hartree-Fock lab"};
  app.require_subcommand(1);

  Options opt;
  const std::vector<std::string> commands = {"solve-df", "solve-ephf",
                                             "mittleman", "verify",
                                             "sweep",    "dump-model"};
  std::string chosen;
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config, "run config file")->required();
    sub->add_option("--out", opt.out_dir, "output directory override");
    sub->add_option("--seed", opt.seed, "seed override");
    sub->add_option("--claims", opt.claims,
                    "comma-separated claim ids (verify)");
    sub->add_option("--workers", opt.workers, "worker pool size");
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }
  return run(chosen, opt);
}
