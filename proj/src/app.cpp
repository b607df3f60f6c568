#include "snls/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>

#include "snls/checks.hpp"
#include "snls/config.hpp"
#include "snls/csv_io.hpp"

namespace snls {

namespace {

struct Options
{
  std::string config_path;
  std::string out_dir = "snls_out";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> trajectories;
  int trajectory = 0;
  bool quiet = false;
};

std::string hex64(std::uint64_t v)
{
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class Session
{
public:
  Session(const std::string& command, const Options& opt, std::ostream& out)
    : opt_(opt), out_(out)
  {
    cfg_ = parse_config(opt.config_path, opt.overrides);
    if(opt.seed)
      cfg_.master_seed = *opt.seed;
    if(opt.trajectories)
      cfg_.n_trajectories = *opt.trajectories;
    if(command == "simulate")
      cfg_.dump_states = true;
    cfg_.validate();

    dir_ = opt.out_dir;
    std::filesystem::create_directories(dir_);
    const std::string text = serialize_config(cfg_);
    write("config.ini", text);
    manifest_.add("command", command);
    manifest_.add("config_hash", "fnv1a64:" + hex64(fnv1a64(text)));
    manifest_.add("config_file", opt.config_path.empty() ? std::string("<defaults>") : opt.config_path);
    manifest_.add("master_seed", cfg_.master_seed);
  }

  const RunConfig& cfg() const { return cfg_; }
  Manifest& manifest() { return manifest_; }
  std::ostream& out() { return out_; }
  bool quiet() const { return opt_.quiet; }

  void write(const std::string& name, const std::string& text)
  {
    write_text_file((dir_ / name).string(), text);
  }

  void finish(bool passed)
  {
    manifest_.add("status", passed ? "pass" : "fail");
    write("manifest.txt", manifest_.text());
  }

private:
  const Options& opt_;
  std::ostream& out_;
  RunConfig cfg_;
  std::filesystem::path dir_;
  Manifest manifest_;
};

void print_checks(std::ostream& out, const std::vector<CheckResult>& checks)
{
  std::size_t width = 4;
  for(const auto& c : checks)
    width = std::max(width, c.name.size());
  for(const auto& c : checks)
  {
    std::string name = c.name;
    name.resize(width, ' ');
    out << (c.passed ? "PASS  " : "FAIL  ") << name << "  " << format_exact(c.value)
        << "  <= " << format_exact(c.threshold) << "\n";
  }
}

int cmd_simulate(Session& s, int index, std::ostream& err)
{
  const RunConfig& cfg = s.cfg();
  s.manifest().add("trajectory", std::to_string(index));
  s.manifest().add("trajectory_seed", trajectory_seed(cfg, index));
  try
  {
    const TrajectoryResult r = run_trajectory(cfg, index);
    const std::string i = std::to_string(index);
    s.write("trajectory_" + i + ".csv", observables_csv(r.observables));
    s.write("final_state_" + i + ".csv", state_csv(r.final_state, cfg.grid));
    s.write("states_" + i + ".csv", snapshots_csv(r.observables, r.snapshots, cfg.grid));
    s.manifest().add("max_fixed_point_iterations", std::to_string(r.solver_stats.max_iterations));
    if(!s.quiet())
      s.out() << "trajectory " << index << ": " << cfg.time.n_steps() << " steps, final charge "
              << format_number(r.observables.charge.back()) << ", final energy "
              << format_number(r.observables.energy.back()) << "\n";
    s.finish(true);
    return 0;
  }
  catch(const TrajectoryFailure& f)
  {
    err << "FAILED: " << f.what() << "\n";
    s.finish(false);
    return 1;
  }
}

int cmd_ensemble(Session& s, std::ostream& err)
{
  const RunConfig& cfg = s.cfg();
  for(int i = 0; i < cfg.n_trajectories; ++i)
    s.manifest().add("trajectory_seed_" + std::to_string(i), trajectory_seed(cfg, i));
  EnsembleResult result;
  try
  {
    result = run_ensemble(cfg);
  }
  catch(const EnsembleAborted& e)
  {
    err << "FAILED: ensemble aborted: " << e.what() << "\n";
    s.finish(false);
    return 1;
  }
  s.write("ensemble_stats.csv", ensemble_stats_csv(result.stats));
  for(const auto& tr : result.trajectories)
  {
    const std::string i = std::to_string(tr.index);
    s.write("trajectory_" + i + ".csv", observables_csv(tr.observables));
    s.write("final_state_" + i + ".csv", state_csv(tr.final_state, cfg.grid));
  }
  const bool growth_defined = result.stats.times.size() >= 3 && result.trajectories.size() >= 2;
  if(growth_defined)
  {
    const GrowthRate g = mean_charge_growth(result);
    const double target = hs_norm_squared(cfg.noise, 0);
    s.manifest().add("mean_charge_slope", format_number(g.slope));
    s.manifest().add("mean_charge_slope_se", format_number(g.standard_error));
    s.manifest().add("hs_norm_squared_s0", format_number(target));
    if(!s.quiet())
      s.out() << "mean charge slope " << format_number(g.slope) << " +- " << format_number(g.standard_error)
              << " (noise trace " << format_number(target) << ")\n";
  }
  s.manifest().add("failed_trajectories", std::to_string(result.failures.size()));
  if(!result.failures.empty())
  {
    err << "FAILED: " << result.failures.front().message << "\n";
    s.finish(false);
    return 1;
  }
  s.finish(true);
  return 0;
}

int cmd_converge(Session& s, std::ostream& err)
{
  const RunConfig& cfg = s.cfg();
  for(int i = 0; i < cfg.n_trajectories; ++i)
    s.manifest().add("trajectory_seed_" + std::to_string(i), trajectory_seed(cfg, i));
  ConvergenceReport report;
  try
  {
    report = convergence_study(cfg, cfg.taus, cfg.tau_ref);
  }
  catch(const TrajectoryFailure& f)
  {
    err << "FAILED: " << f.what() << "\n";
    s.finish(false);
    return 1;
  }
  s.write("convergence.csv", convergence_csv(report));
  s.manifest().add("tau_ref", format_number(report.tau_ref));
  s.manifest().add("fitted_slope", format_number(report.fitted_slope));
  s.manifest().add("fitted_intercept", format_number(report.intercept));
  if(!s.quiet())
    for(std::size_t l = 0; l < report.taus.size(); ++l)
      s.out() << "tau " << format_number(report.taus[l]) << "  rms error " << format_number(report.errors[l])
              << "  se " << format_number(report.standard_errors[l]) << "\n";
  s.out() << "fitted slope: " << format_number(report.fitted_slope) << "\n";
  s.finish(true);
  return 0;
}

int cmd_invariants(Session& s, std::ostream& err)
{
  const auto checks = run_invariant_suite(s.cfg());
  s.write("invariants.csv", checks_csv(checks));
  if(!s.quiet())
    print_checks(s.out(), checks);
  for(const auto& c : checks)
    if(!c.passed)
    {
      err << "FAILED: " << c.name << " = " << format_number(c.value) << " > " << format_number(c.threshold)
          << "\n";
      s.finish(false);
      return 1;
    }
  s.finish(true);
  return 0;
}

int cmd_noise_check(Session& s, std::ostream& err)
{
  const NoiseCheckReport r = run_noise_check(s.cfg());
  s.write("noise_variance.csv", noise_variance_csv(r));
  s.write("noise_covariance.csv", noise_covariance_csv(r));
  double worst_var = 0.0;
  double worst_cov = 0.0;
  for(const auto& row : r.variances)
    worst_var = std::max(worst_var, std::abs(row.z));
  for(const auto& row : r.cross)
    worst_cov = std::max(worst_cov, std::abs(row.z));
  if(!s.quiet())
    s.out() << (worst_var <= r.z_limit ? "PASS" : "FAIL") << "  mode variances       max |z| "
            << format_number(worst_var) << "  <= " << format_number(r.z_limit) << "\n"
            << (worst_cov <= r.z_limit ? "PASS" : "FAIL") << "  cross-step covariance max |z| "
            << format_number(worst_cov) << "  <= " << format_number(r.z_limit) << "\n";
  if(!r.passed)
  {
    for(const auto& row : r.variances)
      if(!(std::abs(row.z) <= r.z_limit))
      {
        err << "FAILED: variance of mode " << row.mode << " (" << row.part << "), z = " << format_number(row.z)
            << "\n";
        s.finish(false);
        return 1;
      }
    for(const auto& row : r.cross)
      if(!(std::abs(row.z) <= r.z_limit))
      {
        err << "FAILED: cross-step covariance of mode " << row.mode << ", z = " << format_number(row.z) << "\n";
        s.finish(false);
        return 1;
      }
    err << "FAILED: real noise produced a nonzero imaginary part\n";
    s.finish(false);
    return 1;
  }
  s.finish(true);
  return 0;
}

}  // namespace

int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Stochastic nonlinear Schroedinger solver with quadratic potential", "snls"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--config", opt.config_path, "configuration file (defaults if omitted)");
  app.add_option("--out", opt.out_dir, "output directory, created if absent")->capture_default_str();
  app.add_option("--set", opt.overrides, "override a key: key=value or section.key=value")
      ->allow_extra_args(false);
  std::uint64_t seed = 0;
  int trajectories = 0;
  auto* seed_opt = app.add_option("--seed", seed, "master seed (replaces ensemble.master_seed)");
  auto* traj_opt =
      app.add_option("--trajectories", trajectories, "number of trajectories")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", opt.quiet, "print only failures and headline results");

  auto* simulate = app.add_subcommand("simulate", "integrate one trajectory and dump its states");
  simulate->add_option("--trajectory", opt.trajectory, "trajectory index")->check(CLI::NonNegativeNumber);
  app.add_subcommand("ensemble", "run the trajectory ensemble and its mean charge and energy");
  app.add_subcommand("converge", "strong convergence study against a fine reference step");
  app.add_subcommand("invariants", "per-step identity checks");
  app.add_subcommand("noise-check", "statistical tests of the noise generator");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try
  {
    app.parse(reversed);
  }
  catch(const CLI::CallForHelp&)
  {
    out << app.help();
    return 0;
  }
  catch(const CLI::ParseError& e)
  {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  if(seed_opt->count() > 0)
    opt.seed = seed;
  if(traj_opt->count() > 0)
    opt.trajectories = trajectories;
  const std::string command = app.get_subcommands().front()->get_name();
  try
  {
    Session session(command, opt, out);
    if(command == "simulate")
      return cmd_simulate(session, opt.trajectory, err);
    if(command == "ensemble")
      return cmd_ensemble(session, err);
    if(command == "converge")
      return cmd_converge(session, err);
    if(command == "invariants")
      return cmd_invariants(session, err);
    return cmd_noise_check(session, err);
  }
  catch(const std::exception& e)
  {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace snls
