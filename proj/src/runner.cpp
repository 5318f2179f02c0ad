#include "dflab/runner.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include "dflab/report.hpp"
#include "dflab/verify.hpp"

namespace dflab {

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return cfg.output_dir + "/" + name;
}

void write_meta(const RunConfig& cfg, const std::string& command,
                double seconds, std::vector<std::string>& files) {
  // Timestamps live here and only here, so the report files themselves are
  // reproducible byte-for-byte.
  auto now = std::chrono::system_clock::now().time_since_epoch();
  Json meta{{"command", command},
            {"wall_seconds", seconds},
            {"unix_time",
             std::chrono::duration_cast<std::chrono::seconds>(now).count()}};
  std::string p = out_path(cfg, "run_meta.json");
  write_file_atomic(p, meta.dump(2) + "\n");
  files.push_back(p);
}

Json base_report(const RunConfig& cfg, const std::string& command) {
  return Json{{"schema_version", 1},
              {"command", command},
              {"config", config_json(cfg)},
              {"seed", cfg.seed}};
}

std::string occupations_csv(const SolveReport& rep) {
  std::string csv = "index,occupation\n";
  for (Eigen::Index i = 0; i < rep.occupations.size(); ++i)
    csv += std::to_string(i) + "," +
           ([](double v) {
             char b[40];
             std::snprintf(b, sizeof(b), "%.17g", v);
             return std::string(b);
           })(rep.occupations[i]) +
           "\n";
  return csv;
}

}  // namespace

CommandOutcome run_command(const RunConfig& cfg, const std::string& command) {
  CommandOutcome out;
  auto t0 = std::chrono::steady_clock::now();
  auto fin = [&](Json report) {
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    out.report = std::move(report);
    std::string name = command;
    for (auto& ch : name)
      if (ch == '-') ch = '_';
    std::string p = out_path(cfg, name + "_report.json");
    write_file_atomic(p, out.report.dump(2) + "\n");
    out.files_written.push_back(p);
    write_meta(cfg, command, secs, out.files_written);
  };

  try {
    if (command == "solve-df") {
      ModelSpace m = build_model(cfg.model, cfg.phys);
      SolveReport rep = solve_df(m, cfg.phys, cfg.solver);
      Json doc = base_report(cfg, command);
      doc["result"] = to_json(rep);
      std::string p = out_path(cfg, "solve_df_occupations.csv");
      write_file_atomic(p, occupations_csv(rep));
      out.files_written.push_back(p);
      fin(doc);
    } else if (command == "solve-ephf") {
      ModelSpace m = build_model(cfg.model, cfg.phys);
      Mat p_plus, p_minus;
      double trace_g = 0.0;
      if (cfg.solver.sea_start == SeaStart::df_minimizer) {
        SolveReport df = solve_df(m, cfg.phys, cfg.solver);
        MeanField mf = mean_field(df.gamma, m, cfg.phys);
        p_plus = mf.p_plus;
        p_minus = mf.p_minus;
        trace_g = df.gamma.trace();
      } else {
        std::tie(p_plus, p_minus) = free_projectors(m);
      }
      SolveReport rep =
          solve_ephf(p_plus, p_minus, m, cfg.phys, cfg.solver, trace_g);
      Json doc = base_report(cfg, command);
      doc["result"] = to_json(rep);
      std::string p = out_path(cfg, "solve_ephf_occupations.csv");
      write_file_atomic(p, occupations_csv(rep));
      out.files_written.push_back(p);
      fin(doc);
    } else if (command == "mittleman") {
      ModelSpace m = build_model(cfg.model, cfg.phys);
      MittlemanResult mr = mittleman(m, cfg.phys, cfg.solver);
      Json doc = base_report(cfg, command);
      doc["result"] = to_json(mr);
      std::string csv = "k,e,trace_g,purely_electronic,nondecreasing\n";
      double prev = 0.0;
      for (size_t i = 0; i < mr.trajectory.size(); ++i) {
        const auto& s = mr.trajectory[i];
        bool nondec = i == 0 || s.e >= prev - 10.0 * cfg.solver.tol;
        char b[96];
        std::snprintf(b, sizeof(b), "%d,%.17g,%.17g,%d,%d\n", s.k, s.e,
                      s.trace_g, s.purely_electronic ? 1 : 0, nondec ? 1 : 0);
        csv += b;
        prev = s.e;
      }
      std::string p = out_path(cfg, "mittleman_trajectory.csv");
      write_file_atomic(p, csv);
      out.files_written.push_back(p);
      fin(doc);
    } else if (command == "sweep") {
      if (!cfg.has_sweep || cfg.sweep.values.empty())
        throw ConfigError("sweep command needs a [sweep] section");
      struct Row {
        double value = 0.0;
        double e_q = 0.0, e_sea = 0.0, e_est = 0.0, delta = 0.0;
        bool censored = false;
        bool ok = false;
        std::string error;
      };
      std::vector<Row> rows(cfg.sweep.values.size());
      std::atomic<size_t> next{0};
      auto work = [&] {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= cfg.sweep.values.size()) break;
          Row& r = rows[i];
          r.value = cfg.sweep.values[i];
          try {
            PhysParams p = cfg.phys;
            if (cfg.sweep.vary == SweepSpec::Vary::c)
              p.c = r.value;
            else
              p.alpha = r.value;
            ModelSpace m = build_model(cfg.model, p);
            MittlemanResult mr = mittleman(m, p, cfg.solver);
            r.e_q = mr.df.energy;
            r.e_sea = mr.trajectory.front().e;
            r.e_est = mr.e_q_estimate;
            r.delta = r.e_q - r.e_sea;
            r.censored = !(r.delta > 1e-12 * p.c * p.c);
            r.ok = true;
          } catch (const std::exception& e) {
            r.error = e.what();
          }
        }
      };
      int workers = std::max(1, std::min<int>(cfg.workers,
                                              int(cfg.sweep.values.size())));
      if (workers == 1) {
        work();
      } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
      }
      std::string csv = "value,E_q,e_ephf_df_sea,e_mittleman,delta,censored\n";
      bool all_ok = true;
      for (const auto& r : rows) {
        char b[160];
        std::snprintf(b, sizeof(b), "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                      r.value, r.e_q, r.e_sea, r.e_est, r.delta,
                      r.censored ? 1 : 0);
        csv += b;
        if (!r.ok) all_ok = false;
      }
      std::string p = out_path(cfg, "sweep_points.csv");
      write_file_atomic(p, csv);
      out.files_written.push_back(p);
      Json doc = base_report(cfg, command);
      Json jrows = Json::array();
      for (const auto& r : rows)
        jrows.push_back(Json{{"value", r.value},
                             {"E_q", r.e_q},
                             {"e_ephf_df_sea", r.e_sea},
                             {"e_mittleman", r.e_est},
                             {"delta", r.delta},
                             {"censored", r.censored},
                             {"ok", r.ok},
                             {"error", r.error}});
      doc["result"] = Json{{"points", jrows}};
      if (!all_ok) out.exit_code = 3;
      fin(doc);
    } else if (command == "verify") {
      VerifyContext ctx;
      ctx.cfg = cfg;
      ctx.seed = cfg.seed;
      std::vector<ClaimResult> claims = run_claims(ctx, cfg.verify.claims);
      Json doc = base_report(cfg, command);
      Json jc = Json::array();
      bool all_pass = true;
      for (const auto& c : claims) {
        Json j{{"claim_id", c.claim_id}, {"pass", c.pass},
               {"measured", c.measured}, {"expected", c.expected},
               {"tolerance", c.tolerance}, {"note", c.note}};
        Json arts = Json::array();
        for (const auto& [name, csv] : c.artifacts) {
          std::string p = out_path(cfg, "claim_" + name + ".csv");
          write_file_atomic(p, csv);
          out.files_written.push_back(p);
          arts.push_back(p);
        }
        j["artifacts"] = arts;
        jc.push_back(j);
        if (!c.pass) all_pass = false;
      }
      doc["result"] = Json{{"claims", jc}, {"all_pass", all_pass}};
      if (!all_pass) out.exit_code = 4;
      fin(doc);
    } else if (command == "dump-model") {
      ModelSpace m = build_model(cfg.model, cfg.phys);
      std::string p = out_path(cfg, "model.dump");
      write_file_atomic(p, dump_model(m));
      out.files_written.push_back(p);
      Json doc = base_report(cfg, command);
      doc["result"] = Json{{"path", p}, {"dim", m.dim}};
      fin(doc);
    } else {
      throw ConfigError("unknown command: " + command);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    Json doc = base_report(cfg, command);
    doc["error"] = e.what();
    out.report = doc;
    out.exit_code = 3;
    std::string name = command;
    for (auto& ch : name)
      if (ch == '-') ch = '_';
    write_file_atomic(out_path(cfg, name + "_report.json"),
                      doc.dump(2) + "\n");
  }
  return out;
}

}  // namespace dflab
