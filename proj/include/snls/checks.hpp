#ifndef SNLS_CHECKS_HPP
#define SNLS_CHECKS_HPP

#include <string>
#include <vector>

#include "snls/experiments.hpp"

namespace snls {

struct CheckResult
{
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

bool all_passed(const std::vector<CheckResult>& checks);

/// Per-step identity suite on trajectory 0 of the configuration: charge and energy
/// recursions, solver residuals, deterministic charge drift (ε = 0), symplectic-form
/// drift of two tangent vectors along a mid-point path (σ = 1), and Cayley operator
/// facts on random states.
std::vector<CheckResult> run_invariant_suite(const RunConfig& cfg);

struct ModeVarianceRow
{
  int mode = 0;
  /// "re" or "im" part of the coefficient.
  std::string part = "re";
  double expected = 0.0;
  double empirical = 0.0;
  /// (empirical/expected - 1) in units of the relative standard error sqrt(2/(n-1)).
  double z = 0.0;
};

struct CrossCovarianceRow
{
  int mode = 0;
  double covariance = 0.0;
  double standard_error = 0.0;
  double z = 0.0;
};

struct NoiseCheckReport
{
  int samples = 0;
  std::vector<ModeVarianceRow> variances;
  std::vector<CrossCovarianceRow> cross;
  double z_limit = 5.0;
  bool passed = false;
};

/// Sample statistics of the configured noise at step cfg.time.tau(): mode-coefficient
/// variances (recovered by sine projection) against τε²k^{-2γ}, and covariance of
/// successive increments. Requires n_modes < n_cells.
NoiseCheckReport run_noise_check(const RunConfig& cfg, int variance_samples = 100000,
                                 int covariance_pairs = 10000);

}  // namespace snls

#endif
