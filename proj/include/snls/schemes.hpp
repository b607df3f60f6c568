#ifndef SNLS_SCHEMES_HPP
#define SNLS_SCHEMES_HPP

#include <string>
#include <vector>

#include "snls/grid.hpp"
#include "snls/linops.hpp"
#include "snls/noise.hpp"

namespace snls {

enum class SchemeKind { midpoint, truncated_midpoint, multisymplectic };
enum class CutoffKind { smooth_bump, hard_clip };

struct SchemeConfig
{
  SchemeKind scheme = SchemeKind::midpoint;
  double fp_tol = 1e-12;
  int fp_max_iter = 100;
  /// Radius R of the H¹ ball outside which the truncated scheme switches the
  /// nonlinearity off.
  double truncation_radius = 10.0;
  CutoffKind cutoff = CutoffKind::smooth_bump;

  void validate() const;
  bool operator==(const SchemeConfig&) const = default;
};

/// Raised when the fixed-point iteration hits fp_max_iter; usually τ is too large
/// for the current amplitude.
class NonConvergence : public Error
{
public:
  NonConvergence(int iterations, double last_increment);
  int iterations() const { return iterations_; }
  double last_increment() const { return last_increment_; }

private:
  int iterations_;
  double last_increment_;
};

/// Raised when a step produces NaN or Inf.
class NumericalBreakdown : public Error
{
public:
  using Error::Error;
};

struct StepStats
{
  int iterations = 0;
  /// Discrete L² norm of the τ-scaled scheme residual at the accepted iterate.
  double residual = 0.0;
  /// ‖w^{(m+1)} - w^{(m)}‖ for every sweep.
  std::vector<double> increments;
};

/// μ(r): 1 on [0,1], 0 on [2,∞). The smooth kind is the C^∞ bump
/// g(2-r)/(g(2-r)+g(r-1)) with g(s) = exp(-1/s); the hard-clip kind is piecewise linear.
double cutoff(double r, CutoffKind kind);

/// sqrt(h Σ|u_j|² + h Σ|δ_x⁺u_j|²) with zero ghosts, j = 0..n_cells-1 in the difference sum.
double discrete_h1_norm(const StateVector& u, const GridSpec& grid);

/// Arithmetic half-grid averages (u_j + u_{j+1})/2, j = 0..n_cells-1, with u_0 = u_{n_cells} = 0.
std::vector<Complex> half_grid_values(const StateVector& u);

/// Time stepper for one (grid, params, τ, scheme) combination. Linear operators are
/// factored in the constructor; step calls are const and thread-safe.
class Stepper
{
public:
  Stepper(const GridSpec& grid, const ModelParams& params, double tau, const SchemeConfig& cfg);

  const GridSpec& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }
  const SchemeConfig& config() const { return cfg_; }
  double tau() const { return tau_; }
  const CayleyOps& cayley() const { return cayley_; }

  /// Dispatches on config().scheme.
  StateVector step(const StateVector& u, const WienerIncrement& dW, StepStats* stats = nullptr) const;

  StateVector midpoint(const StateVector& u, const WienerIncrement& dW, StepStats* stats = nullptr) const;
  StateVector truncated_midpoint(const StateVector& u, const WienerIncrement& dW,
                                 StepStats* stats = nullptr) const;
  StateVector multisymplectic(const StateVector& u, const WienerIncrement& dW,
                              StepStats* stats = nullptr) const;

  /// Propagates a perturbation through the linearised mid-point map along the base
  /// step u_n -> u_np1 (σ = 1).
  StateVector tangent(const StateVector& u_n, const StateVector& u_np1, const StateVector& xi,
                      StepStats* stats = nullptr) const;

  /// τ-scaled residual of the configured scheme's defining equation.
  double residual(const StateVector& u_n, const StateVector& u_np1, const WienerIncrement& dW) const;

  double tangent_residual(const StateVector& u_n, const StateVector& u_np1, const StateVector& xi_n,
                          const StateVector& xi_np1) const;

  /// μ_R evaluated at w, 1 for the untruncated schemes.
  double cutoff_factor(const StateVector& w) const;

private:
  StateVector midpoint_drift(const StateVector& w, double nonlinear_scale) const;
  StateVector multisym_drift(const std::vector<Complex>& half) const;
  double midpoint_residual(const StateVector& u_n, const StateVector& u_np1, const WienerIncrement& dW,
                           double nonlinear_scale) const;
  double multisym_residual(const StateVector& u_n, const StateVector& u_np1,
                           const WienerIncrement& dW) const;

  GridSpec grid_;
  ModelParams params_;
  double tau_;
  SchemeConfig cfg_;
  CayleyOps cayley_;
  ToeplitzTridiagonal averaging_;  // B u = (u_{j-1} + 2u_j + u_{j+1})/2
  ToeplitzTridiagonal ms_matrix_;  // B - iτΔ_h
  std::vector<double> x2_nodes_;
  std::vector<double> x2_half_;
};

StateVector midpoint_step(const StateVector& u_n, const WienerIncrement& dW, const ModelParams& params,
                          const GridSpec& grid, double tau, const SchemeConfig& cfg);
StateVector truncated_midpoint_step(const StateVector& u_n, const WienerIncrement& dW,
                                    const ModelParams& params, const GridSpec& grid, double tau,
                                    const SchemeConfig& cfg);
StateVector multisymplectic_step(const StateVector& u_n, const WienerIncrement& dW,
                                 const ModelParams& params, const GridSpec& grid, double tau,
                                 const SchemeConfig& cfg);
StateVector tangent_step(const StateVector& u_n, const StateVector& u_np1, const StateVector& xi_n,
                         const ModelParams& params, const GridSpec& grid, double tau,
                         const SchemeConfig& cfg);

std::string to_string(SchemeKind kind);
std::string to_string(CutoffKind kind);
SchemeKind scheme_from_string(const std::string& name);
CutoffKind cutoff_from_string(const std::string& name);

}  // namespace snls

#endif
