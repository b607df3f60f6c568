#ifndef SNLS_NOISE_HPP
#define SNLS_NOISE_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "snls/grid.hpp"

namespace snls {

enum class NoiseKind { real, complex };

/// Truncated spectral Q-Wiener process
///   W(t,x) = ε Σ_{k=1}^{M} k^{-γ} β_k(t) sin(πkx).
/// The basis sin(πkx) is used as is, so ‖e_k‖² = 1/2 enters every norm.
struct NoiseSpec
{
  int n_modes = 50;
  double decay = 4.6;
  double epsilon = 0.0;
  NoiseKind kind = NoiseKind::real;

  /// k^{-γ}, k >= 1
  double amplitude(int k) const;
  void validate() const;
  bool operator==(const NoiseSpec&) const = default;
};

/// ΔW_n = W(t_{n+1}) - W(t_n) evaluated at the interior nodes (ε included).
struct WienerIncrement
{
  StateVector values;
  long step_index = 0;
};

using Rng = std::mt19937_64;

/// 64-bit avalanche mix of a master seed and a stream index (splitmix64 finaliser).
std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t stream_index);

/// Precomputed table ε k^{-γ} sin(πk x_j) for one grid.
class NoiseField
{
public:
  NoiseField(const NoiseSpec& spec, const GridSpec& grid);

  const NoiseSpec& spec() const { return spec_; }
  std::size_t n_nodes() const { return n_nodes_; }

  /// Draws the M Brownian increments β_k(t+τ) - β_k(t); variance τ per real component.
  void draw_coefficients(double tau, Rng& rng, std::span<Complex> out) const;

  /// ε Σ_k k^{-γ} ξ_k sin(πk x_j) for given ξ (the injection hook used for exact tests).
  WienerIncrement synthesize(std::span<const Complex> xi, long step_index = 0) const;

private:
  NoiseSpec spec_;
  std::size_t n_nodes_;
  std::vector<double> table_;  // n_modes x n_nodes, row-major
};

/// One increment over a step tau from the given stream.
WienerIncrement sample_increment(const NoiseSpec& spec, const GridSpec& grid, double tau, Rng& rng,
                                 long step_index = 0);

/// Sequential Wiener increments over steps of size substeps*fine_tau. Every coarse
/// increment is the sum of `substeps` fine Brownian draws, so streams with the same
/// seed and fine_tau describe the same path whatever the coarse step.
class IncrementStream
{
public:
  IncrementStream(const NoiseSpec& spec, const GridSpec& grid, double fine_tau, int substeps,
                  std::uint64_t seed);

  WienerIncrement next();
  /// Coefficients ξ_k of the most recent increment.
  std::span<const Complex> last_coefficients() const { return sum_; }

private:
  NoiseField field_;
  double fine_tau_;
  int substeps_;
  Rng rng_;
  long step_ = 0;
  std::vector<Complex> draw_;
  std::vector<Complex> sum_;
};

/// ε² Σ_k k^{-2γ} ‖e_k‖²_{H^s}, with ‖e_k‖²_{L²} = 1/2 and ‖∇e_k‖²_{L²} = (πk)²/2;
/// s = 1 uses the full H¹ norm ‖e‖² + ‖∇e‖².
double hs_norm_squared(const NoiseSpec& spec, int derivative_order);

/// Discrete sine coefficients c_k = 2h Σ_j u_j sin(πk x_j), k = 1..n_modes.
/// Exact inversion of the synthesis for n_modes < n_cells.
std::vector<Complex> sine_projection(const StateVector& u, const GridSpec& grid, int n_modes);

}  // namespace snls

#endif
