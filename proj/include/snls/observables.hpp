#ifndef SNLS_OBSERVABLES_HPP
#define SNLS_OBSERVABLES_HPP

#include <vector>

#include "snls/grid.hpp"
#include "snls/noise.hpp"
#include "snls/schemes.hpp"

namespace snls {

enum class ChargeForm { node, half_grid };
enum class EnergyForm { semi, multisym };

/// node: h Σ_j |u_j|².  half_grid: h Σ_{j=0}^{n_cells-1} |u_{j+1/2}|² with averaged values.
double charge(const StateVector& u, const GridSpec& grid, ChargeForm form = ChargeForm::node);

/// semi:     ½h Σ|δ_x⁺u_j|² - (θ/2)h Σ|x_j u_j|² - λ/(2σ+2) h Σ|u_j|^{2σ+2}
/// multisym: the same with half-grid values in the potential and nonlinear sums.
double energy(const StateVector& u, const GridSpec& grid, const ModelParams& params,
              EnergyForm form = EnergyForm::semi);

/// Charge form that the scheme's one-step identity is written in.
ChargeForm charge_form_for(SchemeKind scheme);
EnergyForm energy_form_for(SchemeKind scheme);

/// |LHS - RHS| of the scheme's exact one-step charge identity:
///   mid-point:        M(u⁺) = M(u) + 2h Σ_j Im(ΔW_j conj w_j)
///   multi-symplectic: M½(u⁺) = M½(u) + h Σ_j Im((ΔW_{j+1/2} + ΔW_{j-1/2}) conj w_j)
/// with w = (u + u⁺)/2.
double charge_recursion_residual(const StateVector& u_n, const StateVector& u_np1,
                                 const WienerIncrement& dW, const GridSpec& grid, SchemeKind scheme);

/// |LHS - RHS| of the scheme's exact one-step energy identity, obtained by pairing the
/// scheme with conj(δ_t⁺u_j) and taking real parts:
///   H⁺ - H = (λμ/2) h Σ |w_k|^{2σ}(|u⁺_k|² - |u_k|²)
///            - λ/(2σ+2) h Σ (|u⁺_k|^{2σ+2} - |u_k|^{2σ+2})
///            - c h Re Σ_j N_j conj(δ_t⁺u_j)
/// where k runs over nodes (mid-point, N_j = ΔW_j, c = 1) or half-grid points
/// (multi-symplectic, N_j = ΔW_{j+1/2} + ΔW_{j-1/2}, c = 1/2). μ is the cutoff factor
/// of the truncated scheme and 1 otherwise.
double energy_recursion_residual(const StateVector& u_n, const StateVector& u_np1,
                                 const WienerIncrement& dW, const GridSpec& grid,
                                 const ModelParams& params, double tau,
                                 SchemeKind scheme = SchemeKind::multisymplectic,
                                 double cutoff_factor = 1.0);

/// ω(ξ,η) = h Σ_j (Re ξ_j Im η_j - Im ξ_j Re η_j)
double symplectic_form(const StateVector& xi, const StateVector& eta, const GridSpec& grid);

struct ObservableSeries
{
  std::vector<int> steps;
  std::vector<double> times;
  std::vector<double> charge;
  std::vector<double> energy;
  /// Per-step identity defects; entry 0 belongs to the initial record and is zero.
  std::vector<double> charge_residual;
  std::vector<double> energy_residual;

  std::size_t size() const { return times.size(); }
  void push(int step, double t, double m, double e, double charge_res, double energy_res);
};

}  // namespace snls

#endif
