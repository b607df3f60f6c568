#include "snls/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace snls {

namespace {

// Integer multiplier m with tau = m * fine_tau, or nullopt.
std::optional<int> step_ratio(double tau, double fine_tau)
{
  const double ratio = tau / fine_tau;
  const double m = std::round(ratio);
  if(m < 1.0 || std::abs(ratio - m) > 1e-9 * ratio)
    return std::nullopt;
  return static_cast<int>(m);
}

double standard_error(const std::vector<double>& values, double mean)
{
  const std::size_t n = values.size();
  if(n < 2 || std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); }))
    return 0.0;
  double ss = 0.0;
  for(double v : values)
    ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

double mean_of(const std::vector<double>& values)
{
  double sum = 0.0;
  for(double v : values)
    sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

}  // namespace

void RunConfig::validate() const
{
  params.validate();
  noise.validate();
  scheme.validate();
  if(scheme.scheme == SchemeKind::truncated_midpoint && params.sigma != 1.0)
    throw Error("the truncated scheme requires sigma = 1");
  if(n_trajectories < 1)
    throw Error("n_trajectories must be at least 1");
  if(record_every < 1)
    throw Error("record_every must be at least 1");
  if(threads < 0)
    throw Error("threads must be nonnegative");
  if(initial == InitialKind::custom_samples && initial_samples.size() != grid.interior_count())
    throw Error("custom initial condition length does not match the grid");
  if(!(tau_ref > 0.0))
    throw Error("tau_ref must be positive");
  for(double tau : taus)
    if(!(tau > 0.0))
      throw Error("every convergence tau must be positive");
}

StateVector RunConfig::initial_state() const
{
  return initial_condition(grid, initial, initial_samples);
}

std::uint64_t trajectory_seed(const RunConfig& cfg, int trajectory_index)
{
  return mix_seed(cfg.master_seed, static_cast<std::uint64_t>(trajectory_index));
}

TrajectoryFailure::TrajectoryFailure(int trajectory, int step, const std::string& cause)
  : Error("trajectory " + std::to_string(trajectory) + " failed at step " + std::to_string(step) + ": " +
          cause),
    trajectory_(trajectory), step_(step), cause_(cause)
{}

TrajectoryResult run_path(const RunConfig& cfg, double fine_tau, int substeps, std::uint64_t seed,
                          bool record_observables)
{
  const double tau = fine_tau * substeps;
  const TimeGrid time = TimeGrid::from_horizon(cfg.time.horizon(), tau);
  const Stepper stepper(cfg.grid, cfg.params, tau, cfg.scheme);
  IncrementStream noise(cfg.noise, cfg.grid, fine_tau, substeps, seed);

  const SchemeKind kind = cfg.scheme.scheme;
  const ChargeForm cform = charge_form_for(kind);
  const EnergyForm eform = energy_form_for(kind);

  TrajectoryResult result;
  result.seed = seed;
  StateVector u = cfg.initial_state();
  const bool dump = record_observables && cfg.dump_states;
  if(record_observables)
    result.observables.push(0, 0.0, charge(u, cfg.grid, cform), energy(u, cfg.grid, cfg.params, eform), 0.0,
                            0.0);
  if(dump)
    result.snapshots.push_back(u);
  double window_charge_res = 0.0;
  double window_energy_res = 0.0;
  StepStats stats;
  for(int n = 0; n < time.n_steps(); ++n)
  {
    const WienerIncrement dW = noise.next();
    StateVector next;
    try
    {
      next = stepper.step(u, dW, &stats);
    }
    catch(const Error& e)
    {
      throw TrajectoryFailure(-1, n, e.what());
    }
    result.solver_stats.total_iterations += stats.iterations;
    result.solver_stats.max_iterations = std::max(result.solver_stats.max_iterations, stats.iterations);
    result.solver_stats.max_residual = std::max(result.solver_stats.max_residual, stats.residual);
    if(record_observables)
    {
      double mu = 1.0;
      if(kind == SchemeKind::truncated_midpoint)
        mu = stepper.cutoff_factor(0.5 * (u + next));
      window_charge_res = std::max(window_charge_res, charge_recursion_residual(u, next, dW, cfg.grid, kind));
      window_energy_res = std::max(window_energy_res, energy_recursion_residual(u, next, dW, cfg.grid,
                                                                                cfg.params, tau, kind, mu));
    }
    u = std::move(next);
    const int step = n + 1;
    if(record_observables && (step % cfg.record_every == 0 || step == time.n_steps()))
    {
      result.observables.push(step, time.t(step), charge(u, cfg.grid, cform),
                              energy(u, cfg.grid, cfg.params, eform), window_charge_res, window_energy_res);
      window_charge_res = 0.0;
      window_energy_res = 0.0;
      if(dump)
        result.snapshots.push_back(u);
    }
  }
  result.final_state = std::move(u);
  return result;
}

TrajectoryResult run_trajectory(const RunConfig& cfg, int trajectory_index)
{
  cfg.validate();
  const std::uint64_t seed = trajectory_seed(cfg, trajectory_index);
  try
  {
    TrajectoryResult result = run_path(cfg, cfg.time.tau(), 1, seed, true);
    result.index = trajectory_index;
    return result;
  }
  catch(const TrajectoryFailure& f)
  {
    throw TrajectoryFailure(trajectory_index, f.step(), f.cause());
  }
}

EnsembleResult run_ensemble(const RunConfig& cfg)
{
  cfg.validate();
  const int n = cfg.n_trajectories;
  std::vector<std::optional<TrajectoryResult>> slots(n);
  std::vector<std::string> errors(n);
  parallel_for(n, cfg.threads, [&](int i) {
    try
    {
      slots[i] = run_trajectory(cfg, i);
    }
    catch(const Error& e)
    {
      errors[i] = e.what();
    }
  });

  EnsembleResult out;
  for(int i = 0; i < n; ++i)
  {
    if(slots[i])
      out.trajectories.push_back(std::move(*slots[i]));
    else
      out.failures.push_back({i, errors[i]});
  }
  if(static_cast<double>(out.failures.size()) > 0.05 * n)
  {
    std::ostringstream msg;
    msg << out.failures.size() << " of " << n << " trajectories failed; first: " << out.failures.front().message;
    throw EnsembleAborted(msg.str());
  }

  const auto& first = out.trajectories.front().observables;
  const std::size_t records = first.size();
  EnsembleStats& s = out.stats;
  s.times = first.times;
  std::vector<double> charges(out.trajectories.size());
  std::vector<double> energies(out.trajectories.size());
  for(std::size_t r = 0; r < records; ++r)
  {
    for(std::size_t t = 0; t < out.trajectories.size(); ++t)
    {
      charges[t] = out.trajectories[t].observables.charge[r];
      energies[t] = out.trajectories[t].observables.energy[r];
    }
    const double mc = mean_of(charges);
    const double me = mean_of(energies);
    s.mean_charge.push_back(mc);
    s.se_charge.push_back(standard_error(charges, mc));
    s.mean_energy.push_back(me);
    s.se_energy.push_back(standard_error(energies, me));
  }
  return out;
}

SlopeFit slope_fit(const std::vector<double>& xs, const std::vector<double>& ys)
{
  if(xs.size() != ys.size())
    throw Error("slope_fit: xs and ys differ in length");
  if(xs.size() < 3)
    throw Error("slope_fit: need at least three points");
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sxx = 0.0;
  double sxy = 0.0;
  for(std::size_t i = 0; i < xs.size(); ++i)
  {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if(!(sxx > 0.0))
    throw Error("slope_fit: degenerate abscissae (all equal)");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for(std::size_t i = 0; i < xs.size(); ++i)
  {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / static_cast<double>(xs.size()));
  return fit;
}

GrowthRate mean_charge_growth(const EnsembleResult& ensemble)
{
  std::vector<double> slopes;
  slopes.reserve(ensemble.trajectories.size());
  for(const auto& tr : ensemble.trajectories)
    slopes.push_back(slope_fit(tr.observables.times, tr.observables.charge).slope);
  GrowthRate g;
  g.slope = mean_of(slopes);
  g.standard_error = standard_error(slopes, g.slope);
  return g;
}

ConvergenceReport convergence_study(const RunConfig& base, std::vector<double> taus, double tau_ref)
{
  base.validate();
  if(taus.size() < 3)
    throw Error("convergence_study needs at least three step sizes for the slope fit");
  if(!(tau_ref > 0.0))
    throw Error("tau_ref must be positive");
  std::sort(taus.begin(), taus.end(), std::greater<>());
  if(std::adjacent_find(taus.begin(), taus.end()) != taus.end())
    throw Error("convergence step sizes must be distinct");
  std::vector<int> ratios;
  for(double tau : taus)
  {
    if(!(tau > tau_ref))
      throw Error("every tested tau must exceed tau_ref");
    const auto m = step_ratio(tau, tau_ref);
    if(!m)
    {
      std::ostringstream msg;
      msg.precision(17);
      msg << "tau " << tau << " is not an integer multiple of tau_ref " << tau_ref;
      throw Error(msg.str());
    }
    TimeGrid::from_horizon(base.time.horizon(), tau);
    ratios.push_back(*m);
  }
  TimeGrid::from_horizon(base.time.horizon(), tau_ref);

  const int n_traj = base.n_trajectories;
  const std::size_t levels = taus.size();
  std::vector<double> sq_errors(static_cast<std::size_t>(n_traj) * levels);
  parallel_for(n_traj, base.threads, [&](int i) {
    const std::uint64_t seed = trajectory_seed(base, i);
    try
    {
      const StateVector reference = run_path(base, tau_ref, 1, seed, false).final_state;
      for(std::size_t l = 0; l < levels; ++l)
      {
        const StateVector coarse = run_path(base, tau_ref, ratios[l], seed, false).final_state;
        const double e = discrete_l2_norm(reference - coarse, base.grid);
        sq_errors[static_cast<std::size_t>(i) * levels + l] = e * e;
      }
    }
    catch(const TrajectoryFailure& f)
    {
      throw TrajectoryFailure(i, f.step(), f.cause());
    }
  });

  ConvergenceReport report;
  report.taus = taus;
  report.tau_ref = tau_ref;
  report.n_trajectories = n_traj;
  std::vector<double> log_tau;
  std::vector<double> log_err;
  for(std::size_t l = 0; l < levels; ++l)
  {
    std::vector<double> sq(n_traj);
    for(int i = 0; i < n_traj; ++i)
      sq[i] = sq_errors[static_cast<std::size_t>(i) * levels + l];
    const double mse = mean_of(sq);
    const double rms = std::sqrt(mse);
    if(!(rms > 0.0))
      throw Error("zero strong error at tau = " + std::to_string(taus[l]) + "; cannot fit a slope");
    report.errors.push_back(rms);
    // delta method: se(sqrt(m)) = se(m) / (2 sqrt(m))
    report.standard_errors.push_back(standard_error(sq, mse) / (2.0 * rms));
    log_tau.push_back(std::log2(taus[l]));
    log_err.push_back(std::log2(rms));
  }
  const SlopeFit fit = slope_fit(log_tau, log_err);
  report.fitted_slope = fit.slope;
  report.intercept = fit.intercept;
  report.fit_residual = fit.residual;
  return report;
}

int resolve_threads(int requested)
{
  if(requested > 0)
    return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace snls
