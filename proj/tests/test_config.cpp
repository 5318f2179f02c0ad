#include <doctest.h>

#include "dflab/config.hpp"
#include "dflab/report.hpp"

using namespace dflab;

namespace {

const char* kGood = R"(# sample run
[model]
backend = dirac1d
n = 32
box_len = 20.0

[phys]
alpha = 0.05
c = 10
z = 2
q = 2

[solver]
tol = 1e-9
strategy = aufbau

[sweep]
vary = c
values = 10, 20, 40, 80

[output]
dir = out_test
seed = 99
workers = 2
)";

}  // namespace

TEST_CASE("parse a complete config") {
  RunConfig cfg = parse_config_text(kGood);
  CHECK(cfg.model.backend == Backend::dirac1d);
  CHECK(cfg.model.n_grid == 32);
  CHECK(cfg.phys.alpha == 0.05);
  CHECK(cfg.phys.q == 2);
  CHECK(cfg.solver.tol == 1e-9);
  CHECK(cfg.has_sweep);
  REQUIRE(cfg.sweep.values.size() == 4);
  CHECK(cfg.sweep.values[2] == 40.0);
  CHECK(cfg.output_dir == "out_test");
  CHECK(cfg.seed == 99);
  CHECK(cfg.workers == 2);
  CHECK(cfg.model.seed == 99);  // model seed follows the run seed
}

TEST_CASE("unknown keys and sections are rejected with line numbers") {
  try {
    parse_config_text("[model]\nbackend = dirac1d\nn = 32\nbogus = 1\n");
    CHECK(false);
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("line 4") != std::string::npos);
    CHECK(msg.find("bogus") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("[nosuch]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("key_outside = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[phys]\nalpha = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[phys]\nalpha 0.1\n"), ConfigError);
}

TEST_CASE("validation failures surface as config errors") {
  CHECK_THROWS_AS(parse_config_text("[model]\nn = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[phys]\nq = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[output]\nworkers = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[sweep]\nvalues = 1, -2\n"),
                  ConfigError);
}

TEST_CASE("echo and config json are stable") {
  RunConfig cfg = parse_config_text(kGood);
  CHECK(cfg.echo() == parse_config_text(kGood).echo());
  CHECK(config_json(cfg).dump() == config_json(cfg).dump());
  // The echo itself re-parses to the same configuration.
  RunConfig cfg2 = parse_config_text(cfg.echo());
  CHECK(config_json(cfg2).dump() == config_json(cfg).dump());
}

TEST_CASE("density dump round trip") {
  ModelConfig mc;
  mc.backend = Backend::synthetic;
  mc.synth_dim = 8;
  mc.seed = 3;
  PhysParams p{0.1, 4.0, 1.0, 1};
  ModelSpace m = build_model(mc, p);
  Mat g0(m.dim, m.dim);
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j)
      g0(i, j) = Complex(0.01 * (i + 1) * (j + 1), 0.001 * (i - j));
  DensityMatrix g(g0);
  std::string text = dump_density(g);
  DensityMatrix back = load_density(text);
  CHECK((back.mat() - g.mat()).norm() <= 1e-15 * g.mat().norm());

  std::string mt = dump_model(m);
  ModelDump md = load_model_dump(mt);
  CHECK(md.dim == m.dim);
  CHECK((md.d_free - m.d_free).norm() == 0.0);
  CHECK((md.w_kernel - m.w_kernel).norm() == 0.0);
}
