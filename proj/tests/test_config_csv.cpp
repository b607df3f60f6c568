#include <doctest.h>

#include <charconv>
#include <cstring>
#include <algorithm>
#include <filesystem>

#include "snls/config.hpp"
#include "snls/csv_io.hpp"
#include "support.hpp"

using namespace snls;

namespace {

std::filesystem::path scratch_dir(const std::string& name)
{
  const auto dir = std::filesystem::temp_directory_path() / ("snls_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

bool same_bits(double a, double b)
{
  return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace

TEST_CASE("defaults and a single override")
{
  CHECK(parse_config_text("") == RunConfig{});
  const RunConfig cfg = parse_config_text("", {"tau=0.001"});
  RunConfig expected;
  expected.time = TimeGrid::from_horizon(0.5, 0.001);
  CHECK(cfg == expected);
  CHECK(cfg.time.tau() == 0.001);
  CHECK(cfg.time.n_steps() == 500);
}

TEST_CASE("sectioned file with overrides")
{
  const std::string text =
      "# desk run\n"
      "[grid]\n"
      "n_cells = 32\n"
      "\n"
      "[time]\n"
      "tau = 0.01\n"
      "horizon = 1\n"
      "[params]\n"
      "theta = -1\n"
      "[noise]\n"
      "epsilon = 0.2\n"
      "kind = complex\n"
      "[scheme]\n"
      "scheme = multi-symplectic\n"
      "; comment\n"
      "[converge]\n"
      "taus = 0.1, 0.05, 0.025\n";
  const RunConfig cfg = parse_config_text(text, {"ensemble.n_trajectories=7", "theta=1"});
  CHECK(cfg.grid.n_cells() == 32);
  CHECK(cfg.time.n_steps() == 100);
  CHECK(cfg.params.theta == 1.0);
  CHECK(cfg.noise.epsilon == 0.2);
  CHECK(cfg.noise.kind == NoiseKind::complex);
  CHECK(cfg.scheme.scheme == SchemeKind::multisymplectic);
  CHECK(cfg.n_trajectories == 7);
  CHECK(cfg.taus == std::vector<double>{0.1, 0.05, 0.025});
}

TEST_CASE("rejections carry diagnostics")
{
  CHECK_THROWS_WITH_AS(parse_config_text("", {"sigma=2.5"}), doctest::Contains("sigma must lie in (0,2)"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[grid]\nn_cell = 3\n"), doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[grid]\nn_cell = 3\n"), doctest::Contains("n_cell"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[grids]\n"), doctest::Contains("unknown section"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[grid]\ntau = 0.1\n"), doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("", {"tua=0.1"}), doctest::Contains("tua"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("", {"tau"}), doctest::Contains("key=value"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[time]\ntau = fast\n"), doctest::Contains("time.tau"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[grid]\nn_cells = 1\n"), doctest::Contains("n_cells"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("", {"tau=0.3"}), doctest::Contains("time"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[grid\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("just words\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("", {"lambda=0"}), ConfigError);
  CHECK_THROWS_AS(parse_config_text("", {"kind=pink"}), ConfigError);
  CHECK_THROWS_AS(parse_config_text("", {"taus=0.1,,0.2"}), ConfigError);
  CHECK_THROWS_AS(parse_config_text("", {"initial=custom"}), ConfigError);
  CHECK_THROWS_AS(parse_config("/nonexistent/snls.ini"), ConfigError);
}

TEST_CASE("serialisation round trip")
{
  RunConfig cfg = parse_config_text("", {"n_cells=48", "tau=0.003125", "horizon=0.25", "theta=-0.3",
                                         "lambda=-1", "sigma=0.8", "epsilon=0.1", "n_modes=7", "decay=2.25",
                                         "kind=complex", "scheme=multi-symplectic", "fp_tol=1e-11",
                                         "fp_max_iter=40", "truncation_radius=3.5", "cutoff=hard-clip",
                                         "n_trajectories=3", "master_seed=18446744073709551615",
                                         "record_every=4", "threads=2", "dump_states=true",
                                         "taus=0.01,0.005,0.0025", "tau_ref=0.000625"});
  const std::string text = serialize_config(cfg);
  const RunConfig again = parse_config_text(text);
  CHECK(again == cfg);
  CHECK(serialize_config(again) == text);
  CHECK(parse_config_text(serialize_config(RunConfig{})) == RunConfig{});
  for(const auto& key : config_keys())
    CHECK(text.find(key.substr(key.find('.') + 1)) != std::string::npos);
}

TEST_CASE("custom initial condition from a state file")
{
  const auto dir = scratch_dir("initial");
  const GridSpec g(8);
  Rng rng(3);
  const auto u = test::random_state(g, rng);
  write_text_file((dir / "u0.csv").string(), state_csv(u, g));
  write_text_file((dir / "run.ini").string(), "[grid]\nn_cells = 8\n[initial]\ninitial = custom\ninitial_file = u0.csv\n");
  const RunConfig cfg = parse_config((dir / "run.ini").string());
  CHECK(cfg.initial_state() == u);
  CHECK(parse_config_text(serialize_config(cfg)) == cfg);
  CHECK_THROWS_AS(parse_config((dir / "run.ini").string(), {"n_cells=16"}), ConfigError);
}

TEST_CASE("number formatting")
{
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-3.0) == "-3");
  CHECK(format_number(1e-300).find("e-300") != std::string::npos);
  CHECK(format_exact(0.1) == "0.1");
  for(double v : {0.1, 1.0 / 3.0, -2.718281828459045, 6.02e23, 5e-324})
  {
    double back = 0.0;
    const std::string s = format_number(v);
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(same_bits(v, back));
  }
}

TEST_CASE("state CSV round trip is bit exact")
{
  const GridSpec g(64);
  Rng rng(77);
  auto u = test::random_state(g, rng);
  u[0] = Complex(-0.0, 5e-324);
  u[1] = Complex(1.0 / 3.0, -1e300);
  const std::string text = state_csv(u, g);
  CHECK(text.rfind("j,x,re,im\n", 0) == 0);
  const auto back = parse_state_csv(text);
  REQUIRE(back.size() == u.size());
  for(std::size_t i = 0; i < u.size(); ++i)
  {
    CHECK(same_bits(back[i].real(), u[i].real()));
    CHECK(same_bits(back[i].imag(), u[i].imag()));
  }
}

TEST_CASE("state CSV errors")
{
  CHECK_THROWS_AS(parse_state_csv(""), Error);
  CHECK_THROWS_AS(parse_state_csv("a,b\n1,2\n"), Error);
  CHECK_THROWS_AS(parse_state_csv("j,x,re,im\n"), Error);
  CHECK_THROWS_AS(parse_state_csv("j,x,re,im\n1,0.5,1\n"), Error);
  CHECK_THROWS_AS(parse_state_csv("j,x,re,im\n2,0.5,1,0\n"), Error);
  CHECK_THROWS_WITH_AS(parse_state_csv("j,x,re,im\n1,0.5,one,0\n", "f.csv"), doctest::Contains("f.csv:2"), Error);
  CHECK(parse_state_csv("j,x,re,im\r\n1,0.5,1,2\r\n").front() == Complex(1, 2));
  CHECK_THROWS_AS(read_state_csv("/nonexistent/state.csv"), Error);
}

TEST_CASE("CSV headers and row counts")
{
  ObservableSeries s;
  s.push(0, 0.0, 0.5, 2.0, 0.0, 0.0);
  s.push(1, 0.01, 0.51, 2.1, 1e-15, 2e-15);
  const std::string obs = observables_csv(s);
  CHECK(obs.rfind("n,t,charge,energy,charge_resid,energy_resid\n", 0) == 0);
  CHECK(std::count(obs.begin(), obs.end(), '\n') == 3);
  CHECK(obs.find("1,0.01,0.51000000000000001,") != std::string::npos);

  EnsembleStats e;
  e.times = {0.0, 1.0};
  e.mean_charge = {0.5, 1.5};
  e.se_charge = {0.0, 0.1};
  e.mean_energy = {2.0, 2.5};
  e.se_energy = {0.0, 0.2};
  CHECK(ensemble_stats_csv(e).rfind("t,mean_charge,se_charge,mean_energy,se_energy\n", 0) == 0);

  ConvergenceReport r;
  r.taus = {0.5, 0.25, 0.125};
  r.errors = {0.25, 0.0625, 0.015625};
  r.standard_errors = {0.01, 0.01, 0.01};
  const std::string conv = convergence_csv(r);
  CHECK(conv.rfind("tau,rms_error,se,log2_tau,log2_err\n", 0) == 0);
  CHECK(conv.find("0.5,0.25,0.01,-1,-2\n") != std::string::npos);

  const GridSpec g(4);
  const std::vector<StateVector> states{StateVector(3), StateVector(3, Complex(1, 0))};
  const std::string snaps = snapshots_csv(s, states, g);
  CHECK(snaps.rfind("n,t,j,x,re,im\n", 0) == 0);
  CHECK(std::count(snaps.begin(), snaps.end(), '\n') == 7);
  CHECK_THROWS_AS(snapshots_csv(s, {StateVector(3)}, g), Error);

  CHECK(checks_csv({CheckResult{"a b", 1e-15, 1e-12, true}}) == "name,value,threshold,passed\n\"a b\",1.0000000000000001e-15,9.9999999999999998e-13,1\n");
}

TEST_CASE("manifest and hash")
{
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  Manifest m;
  m.add("command", "ensemble");
  m.add("master_seed", std::uint64_t{42});
  CHECK(m.text() == "command: ensemble\nmaster_seed: 42\n");
}
