#include "dflab/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dflab {

namespace fs = std::filesystem;

void write_file_atomic(const std::string& path, const std::string& content) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write " + tmp.string());
    f << content;
  }
  fs::rename(tmp, p);
}

namespace {
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

Json to_json(const PhysParams& p) {
  return Json{{"alpha", p.alpha}, {"c", p.c},
              {"z", p.Z},         {"q", p.q},
              {"alpha_c", p.alpha_c()}, {"z_c", p.z_c()}};
}

Json to_json(const DerivedConstants& d) {
  return Json{{"kappa", d.kappa},
              {"lambda0", d.lambda0},
              {"a_const", d.a_const},
              {"radius", d.R},
              {"a_big", d.A_const},
              {"l_const", d.L_const},
              {"c_kl", d.C_kl},
              {"kappa_ok", d.kappa_ok},
              {"lambda0_ok", d.lambda0_ok},
              {"contraction_ok", d.contraction_ok}};
}

Json to_json(const AssumptionReport& a) {
  return Json{{"item1", a.item1},     {"item2", a.item2},
              {"ok", a.ok},           {"r_lower", a.r_lower},
              {"r_upper", a.r_upper}, {"reason", a.reason}};
}

Json to_json(const URCertificate& u) {
  return Json{{"term1", u.term1},
              {"term2", u.term2},
              {"radius", u.R},
              {"member", u.member}};
}

Json to_json(const RetractionTrace& t) {
  return Json{{"residuals", t.residuals},
              {"ratio_obs", t.ratio_obs},
              {"ratio_flagged", t.ratio_flagged},
              {"converged", t.converged},
              {"n_steps", t.n_steps},
              {"final_residual", t.final_residual},
              {"aposteriori_bound", t.aposteriori_bound},
              {"gamma_q_plus_residual", t.gamma_q_plus_residual}};
}

Json to_json(const SolveReport& r) {
  std::vector<double> occ(r.occupations.data(),
                          r.occupations.data() + r.occupations.size());
  return Json{{"converged", r.converged},
              {"energy", r.energy},
              {"occupations", occ},
              {"nu_minus_c2", r.nu_shifted},
              {"filled_shell", r.filled_shell},
              {"filled_shell_residual", r.filled_shell_residual},
              {"purely_electronic", r.purely_electronic},
              {"iterations", r.iterations},
              {"residual_history", r.residual_history},
              {"energy_history", r.energy_history},
              {"final_residual", r.final_residual},
              {"trace", r.trace},
              {"orbital_residual_max", r.orbital_residual_max},
              {"level_crossing_flag", r.level_crossing_flag},
              {"strategy", r.strategy_name},
              {"constants", to_json(r.consts)},
              {"assumption_1", to_json(r.assumption)},
              {"ephf_condition_ok", r.ephf_condition_ok},
              {"ur_certificate", to_json(r.ur)}};
}

Json to_json(const MittlemanResult& r) {
  Json traj = Json::array();
  for (const auto& s : r.trajectory)
    traj.push_back(Json{{"k", s.k},
                        {"e", s.e},
                        {"trace_g", s.trace_g},
                        {"purely_electronic", s.purely_electronic}});
  return Json{{"e_q_estimate", r.e_q_estimate},
              {"e_q_estimate_is_lower_bound_of_sup", true},
              {"trajectory", traj},
              {"converged", r.converged},
              {"df", to_json(r.df)},
              {"last_ephf", to_json(r.last_ephf)}};
}

Json config_json(const RunConfig& cfg) {
  Json model{{"backend", cfg.model.backend == Backend::dirac1d
                             ? "dirac1d"
                             : "synthetic"},
             {"n", cfg.model.n_grid},
             {"box_len", cfg.model.box_len},
             {"soften", cfg.model.soften},
             {"seed", cfg.model.seed},
             {"synth_dim", cfg.model.synth_dim},
             {"synth_gap", cfg.model.synth_gap},
             {"synth_symmetric", cfg.model.synth_symmetric}};
  Json solver{
      {"tol", cfg.solver.tol},
      {"max_iter", cfg.solver.max_iter},
      {"strategy",
       cfg.solver.strategy == DfStrategy::aufbau ? "aufbau" : "gradient"},
      {"retract_tol", cfg.solver.retract.tol_fixed},
      {"retract_max_iter", cfg.solver.retract.max_iter},
      {"radius", cfg.solver.radius},
      {"occ_tol", cfg.solver.occ_tol},
      {"filled_tol", cfg.solver.filled_tol},
      {"ephf_full_set", cfg.solver.ephf_full_set},
      {"max_outer", cfg.solver.max_outer},
      {"sea",
       cfg.solver.sea_start == SeaStart::df_minimizer ? "df" : "free"},
      {"grad_step", cfg.solver.grad_step}};
  Json sweep;
  if (cfg.has_sweep)
    sweep = Json{{"vary", cfg.sweep.vary == SweepSpec::Vary::c ? "c" : "alpha"},
                 {"values", cfg.sweep.values}};
  Json verify{{"claims", cfg.verify.claims},
              {"sample_size", cfg.verify.sample_size},
              {"c_min_filled", cfg.verify.c_min_filled}};
  return Json{{"model", model},
              {"phys", to_json(cfg.phys)},
              {"solver", solver},
              {"sweep", sweep},
              {"verify", verify},
              {"output_dir", cfg.output_dir},
              {"seed", cfg.seed},
              {"workers", cfg.workers}};
}

namespace {

void dump_cmat(std::ostringstream& o, const std::string& name, const Mat& a) {
  o << "matrix " << name << " " << a.rows() << " " << a.cols() << "\n";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j) o << " ";
      o << fmt(a(i, j).real()) << " " << fmt(a(i, j).imag());
    }
    o << "\n";
  }
}

void dump_rmat(std::ostringstream& o, const std::string& name,
               const RMat& a) {
  o << "rmatrix " << name << " " << a.rows() << " " << a.cols() << "\n";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j) o << " ";
      o << fmt(a(i, j));
    }
    o << "\n";
  }
}

Mat read_cmat(std::istream& in, int rows, int cols) {
  Mat a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      double re, im;
      if (!(in >> re >> im)) throw ConfigError("dump: truncated matrix");
      a(i, j) = Complex(re, im);
    }
  return a;
}

RMat read_rmat(std::istream& in, int rows, int cols) {
  RMat a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (!(in >> a(i, j))) throw ConfigError("dump: truncated matrix");
  return a;
}

}  // namespace

std::string dump_model(const ModelSpace& m) {
  std::ostringstream o;
  o << "dflab-dump 1\n";
  o << "kind model\n";
  o << "backend "
    << (m.cfg.backend == Backend::dirac1d ? "dirac1d" : "synthetic") << "\n";
  o << "n_grid " << m.n_grid << "\n";
  o << "n_spinor " << m.n_spinor << "\n";
  o << "dim " << m.dim << "\n";
  o << "box_len " << fmt(m.box_len) << "\n";
  o << "c " << fmt(m.c) << "\n";
  o << "z " << fmt(m.Z) << "\n";
  dump_cmat(o, "d_free", m.d_free);
  dump_cmat(o, "v_mat", m.v_mat);
  dump_rmat(o, "w_kernel", m.w_kernel);
  o << "end\n";
  return o.str();
}

std::string dump_density(const DensityMatrix& g) {
  std::ostringstream o;
  o << "dflab-dump 1\n";
  o << "kind density\n";
  o << "dim " << g.dim() << "\n";
  dump_cmat(o, "gamma", g.mat());
  o << "end\n";
  return o.str();
}

DensityMatrix load_density(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  int version = 0, dim = 0;
  in >> tok >> version;
  if (tok != "dflab-dump" || version != 1)
    throw ConfigError("dump: bad header");
  std::string kind_kw, kind;
  in >> kind_kw >> kind;
  if (kind != "density") throw ConfigError("dump: expected kind density");
  std::string dim_kw;
  in >> dim_kw >> dim;
  if (dim_kw != "dim" || dim <= 0) throw ConfigError("dump: bad dim");
  std::string mk, name;
  int r, c;
  in >> mk >> name >> r >> c;
  if (mk != "matrix" || name != "gamma" || r != dim || c != dim)
    throw ConfigError("dump: bad matrix header");
  return DensityMatrix(read_cmat(in, r, c));
}

ModelDump load_model_dump(const std::string& text) {
  std::istringstream in(text);
  ModelDump d;
  std::string tok;
  int version = 0;
  in >> tok >> version;
  if (tok != "dflab-dump" || version != 1)
    throw ConfigError("dump: bad header");
  std::string kw;
  in >> kw >> tok;
  if (kw != "kind" || tok != "model")
    throw ConfigError("dump: expected kind model");
  in >> kw >> d.backend;
  in >> kw >> d.n_grid;
  in >> kw >> d.n_spinor;
  in >> kw >> d.dim;
  in >> kw >> d.box_len;
  in >> kw >> d.c;
  in >> kw >> d.Z;
  std::string name;
  int r, c;
  in >> kw >> name >> r >> c;
  d.d_free = read_cmat(in, r, c);
  in >> kw >> name >> r >> c;
  d.v_mat = read_cmat(in, r, c);
  in >> kw >> name >> r >> c;
  d.w_kernel = read_rmat(in, r, c);
  return d;
}

}  // namespace dflab
