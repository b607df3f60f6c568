#ifndef SNLS_LINOPS_HPP
#define SNLS_LINOPS_HPP

#include <vector>

#include "snls/grid.hpp"

namespace snls {

/// (u_{j+1} - 2u_j + u_{j-1}) / h² with zero ghost values.
StateVector apply_laplacian(const StateVector& u, const GridSpec& grid);

/// -(4/h²) sin²(πkh/2), eigenvalue of the discrete Dirichlet Laplacian on sin(πk x_j).
double laplacian_eigenvalue(int k, const GridSpec& grid);

/// Constant-coefficient complex tridiagonal matrix (diag on the diagonal, off on
/// both off-diagonals), LU-factored once without pivoting.
class ToeplitzTridiagonal
{
public:
  ToeplitzTridiagonal(std::size_t n, Complex diag, Complex off);

  std::size_t size() const { return inv_pivot_.size(); }
  Complex diag() const { return diag_; }
  Complex off() const { return off_; }

  StateVector apply(const StateVector& x) const;
  StateVector solve(const StateVector& rhs) const;

private:
  Complex diag_;
  Complex off_;
  std::vector<Complex> upper_;      // c'_i of the eliminated system
  std::vector<Complex> inv_pivot_;  // 1 / m_i
};

/// Dense discrete sine transform on the interior nodes. The O(N²) evaluation is the
/// reference definition; N stays at desk scale.
class SineBasis
{
public:
  explicit SineBasis(const GridSpec& grid);

  std::size_t size() const { return n_; }
  /// c_k = 2h Σ_j u_j sin(πk x_j), k = 1..n_cells-1 (stored at k-1).
  std::vector<Complex> forward(const StateVector& u) const;
  /// u_j = Σ_k c_k sin(πk x_j)
  StateVector inverse(const std::vector<Complex>& coeffs) const;
  const std::vector<double>& eigenvalues() const { return eig_; }

private:
  std::size_t n_;
  double h_;
  std::vector<double> table_;  // sin(πk x_j), k-major
  std::vector<double> eig_;
};

enum class ShiftSign { plus, minus };

/// Crank-Nicolson building blocks for a fixed (grid, τ):
///   S_τ = (1 - iτΔ_h/2)^{-1}(1 + iτΔ_h/2),   T_τ = (1 - iτΔ_h/2)^{-1}.
class CayleyOps
{
public:
  CayleyOps(const GridSpec& grid, double tau);

  double tau() const { return tau_; }
  const GridSpec& grid() const { return grid_; }

  /// (1 + iτΔ_h/2)u for plus, (1 - iτΔ_h/2)u for minus.
  StateVector apply_shifted(const StateVector& u, ShiftSign sign) const;
  /// Solves (1 ± iτΔ_h/2)v = u.
  StateVector solve_shifted(const StateVector& u, ShiftSign sign) const;

  StateVector s_tau(const StateVector& u) const;
  StateVector t_tau(const StateVector& u) const;
  /// S_τ^{-1} = (1 + iτΔ_h/2)^{-1}(1 - iτΔ_h/2)
  StateVector s_tau_inverse(const StateVector& u) const;

private:
  GridSpec grid_;
  double tau_;
  ToeplitzTridiagonal plus_;
  ToeplitzTridiagonal minus_;
};

StateVector solve_shifted(const StateVector& u, const GridSpec& grid, double tau, ShiftSign sign);
StateVector cayley_apply(const StateVector& u, const GridSpec& grid, double tau);

/// e^{itΔ_h} realised on the discrete Laplacian's spectrum; t may be negative.
StateVector exact_semigroup(const StateVector& u, double t, const GridSpec& grid);

/// ‖(S(nτ) - S_τ^n) probe‖ in discrete L².
double operator_deviation(int n, double tau, const GridSpec& grid, const StateVector& probe);

/// ‖(S(-nτ) - S_τ^{-n} T_τ) probe‖ in discrete L², the backward estimate paired with
/// the one above.
double resolvent_deviation(int n, double tau, const GridSpec& grid, const StateVector& probe);

}  // namespace snls

#endif
