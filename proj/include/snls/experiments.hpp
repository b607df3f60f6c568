#ifndef SNLS_EXPERIMENTS_HPP
#define SNLS_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "snls/grid.hpp"
#include "snls/noise.hpp"
#include "snls/observables.hpp"
#include "snls/schemes.hpp"

namespace snls {

/// Everything needed to reproduce a run. Defaults are the desk-scale experiment:
/// 64 cells, T = 0.5, 20 noise modes, τ_ref = 2^-12, τ = 2^-7..2^-11, 50 trajectories.
struct RunConfig
{
  GridSpec grid{64};
  TimeGrid time = TimeGrid::from_horizon(0.5, 0.0078125);
  ModelParams params;
  NoiseSpec noise{20, 4.6, 1.4142135623730951, NoiseKind::real};
  SchemeConfig scheme;

  InitialKind initial = InitialKind::sine;
  /// Source of the custom samples (StateVector CSV); kept for serialisation.
  std::string initial_file;
  std::vector<Complex> initial_samples;

  int n_trajectories = 50;
  std::uint64_t master_seed = 20170207;
  int record_every = 1;
  /// Worker threads for ensembles; 0 picks the hardware concurrency.
  int threads = 0;
  /// Keep the full state at every recorded step (for surface plots).
  bool dump_states = false;

  std::vector<double> taus{0.0078125, 0.00390625, 0.001953125, 0.0009765625, 0.00048828125};
  double tau_ref = 0.000244140625;

  void validate() const;
  StateVector initial_state() const;
  bool operator==(const RunConfig&) const = default;
};

/// Seed of trajectory i's private noise stream.
std::uint64_t trajectory_seed(const RunConfig& cfg, int trajectory_index);

struct SolverStats
{
  long total_iterations = 0;
  int max_iterations = 0;
  double max_residual = 0.0;
};

struct TrajectoryResult
{
  int index = 0;
  StateVector final_state;
  ObservableSeries observables;
  /// States at the recorded steps when dump_states is set, aligned with observables.
  std::vector<StateVector> snapshots;
  std::uint64_t seed = 0;
  SolverStats solver_stats;
};

/// A trajectory aborted by NonConvergence or NaN detection.
class TrajectoryFailure : public Error
{
public:
  TrajectoryFailure(int trajectory, int step, const std::string& cause);
  int trajectory() const { return trajectory_; }
  int step() const { return step_; }
  const std::string& cause() const { return cause_; }

private:
  int trajectory_;
  int step_;
  std::string cause_;
};

TrajectoryResult run_trajectory(const RunConfig& cfg, int trajectory_index);

/// Integrates one path on a step of substeps*fine_tau whose increments aggregate
/// fine Brownian draws from `seed`. Observables are recorded only when requested.
TrajectoryResult run_path(const RunConfig& cfg, double fine_tau, int substeps, std::uint64_t seed,
                          bool record_observables);

struct EnsembleStats
{
  std::vector<double> times;
  std::vector<double> mean_charge;
  std::vector<double> se_charge;
  std::vector<double> mean_energy;
  std::vector<double> se_energy;
};

struct EnsembleFailure
{
  int trajectory;
  std::string message;
};

struct EnsembleResult
{
  std::vector<TrajectoryResult> trajectories;  // successful ones, ordered by index
  std::vector<EnsembleFailure> failures;
  EnsembleStats stats;
};

/// Thrown when more than 5% of an ensemble's trajectories fail.
class EnsembleAborted : public Error
{
public:
  using Error::Error;
};

EnsembleResult run_ensemble(const RunConfig& cfg);

struct SlopeFit
{
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual of the fitted line.
  double residual = 0.0;
};

/// Ordinary least squares of ys on xs (at least three points, xs not all equal).
SlopeFit slope_fit(const std::vector<double>& xs, const std::vector<double>& ys);

/// Mean and standard error over trajectories of each path's least-squares charge
/// growth rate; the mean equals the slope of the mean-charge series.
struct GrowthRate
{
  double slope = 0.0;
  double standard_error = 0.0;
};
GrowthRate mean_charge_growth(const EnsembleResult& ensemble);

struct ConvergenceReport
{
  std::vector<double> taus;  // strictly decreasing
  std::vector<double> errors;  // RMS over trajectories of ‖u_ref(T) - u_τ(T)‖
  std::vector<double> standard_errors;
  double tau_ref = 0.0;
  int n_trajectories = 0;
  double fitted_slope = 0.0;
  double intercept = 0.0;
  double fit_residual = 0.0;
};

/// Strong-error study against a τ_ref reference on the same Brownian paths.
ConvergenceReport convergence_study(const RunConfig& base, std::vector<double> taus, double tau_ref);

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <class Fn>
void parallel_for(int count, int threads, Fn&& fn);

int resolve_threads(int requested);

}  // namespace snls

#include "snls/detail/parallel.hpp"

#endif
