#include "snls/linops.hpp"

#include <cmath>
#include <numbers>

namespace snls {

StateVector apply_laplacian(const StateVector& u, const GridSpec& grid)
{
  require_size(u, grid, "apply_laplacian");
  const std::size_t n = u.size();
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  StateVector out(n);
  for(std::size_t i = 0; i < n; ++i)
  {
    const Complex left = i > 0 ? u[i - 1] : Complex{};
    const Complex right = i + 1 < n ? u[i + 1] : Complex{};
    out[i] = (right - 2.0 * u[i] + left) * inv_h2;
  }
  return out;
}

double laplacian_eigenvalue(int k, const GridSpec& grid)
{
  const double s = std::sin(std::numbers::pi * k * grid.h() / 2.0);
  return -4.0 / (grid.h() * grid.h()) * s * s;
}

ToeplitzTridiagonal::ToeplitzTridiagonal(std::size_t n, Complex diag, Complex off)
  : diag_(diag), off_(off), upper_(n), inv_pivot_(n)
{
  if(n == 0)
    throw Error("empty tridiagonal system");
  Complex prev_upper{};
  for(std::size_t i = 0; i < n; ++i)
  {
    const Complex pivot = i == 0 ? diag : diag - off * prev_upper;
    if(std::abs(pivot) == 0.0)
      throw Error("singular pivot in tridiagonal elimination");
    inv_pivot_[i] = 1.0 / pivot;
    upper_[i] = off * inv_pivot_[i];
    prev_upper = upper_[i];
  }
}

StateVector ToeplitzTridiagonal::apply(const StateVector& x) const
{
  const std::size_t n = size();
  if(x.size() != n)
    throw Error("tridiagonal apply: size mismatch");
  StateVector y(n);
  for(std::size_t i = 0; i < n; ++i)
  {
    Complex acc = diag_ * x[i];
    if(i > 0)
      acc += off_ * x[i - 1];
    if(i + 1 < n)
      acc += off_ * x[i + 1];
    y[i] = acc;
  }
  return y;
}

StateVector ToeplitzTridiagonal::solve(const StateVector& rhs) const
{
  const std::size_t n = size();
  if(rhs.size() != n)
    throw Error("tridiagonal solve: size mismatch");
  StateVector x(n);
  x[0] = rhs[0] * inv_pivot_[0];
  for(std::size_t i = 1; i < n; ++i)
    x[i] = (rhs[i] - off_ * x[i - 1]) * inv_pivot_[i];
  for(std::size_t i = n - 1; i-- > 0;)
    x[i] -= upper_[i] * x[i + 1];
  return x;
}

SineBasis::SineBasis(const GridSpec& grid)
  : n_(grid.interior_count()), h_(grid.h()), table_(n_ * n_), eig_(n_)
{
  for(std::size_t k = 0; k < n_; ++k)
  {
    eig_[k] = laplacian_eigenvalue(static_cast<int>(k + 1), grid);
    for(std::size_t i = 0; i < n_; ++i)
      table_[k * n_ + i] = std::sin(std::numbers::pi * static_cast<double>(k + 1) * grid.node(i));
  }
}

std::vector<Complex> SineBasis::forward(const StateVector& u) const
{
  if(u.size() != n_)
    throw Error("sine transform: size mismatch");
  std::vector<Complex> c(n_);
  for(std::size_t k = 0; k < n_; ++k)
  {
    const double* row = table_.data() + k * n_;
    Complex sum{};
    for(std::size_t i = 0; i < n_; ++i)
      sum += row[i] * u[i];
    c[k] = 2.0 * h_ * sum;
  }
  return c;
}

StateVector SineBasis::inverse(const std::vector<Complex>& coeffs) const
{
  if(coeffs.size() != n_)
    throw Error("inverse sine transform: size mismatch");
  StateVector u(n_);
  for(std::size_t k = 0; k < n_; ++k)
  {
    const double* row = table_.data() + k * n_;
    for(std::size_t i = 0; i < n_; ++i)
      u[i] += row[i] * coeffs[k];
  }
  return u;
}

namespace {

ToeplitzTridiagonal shifted_matrix(const GridSpec& grid, double tau, ShiftSign sign)
{
  if(!(tau > 0.0))
    throw Error("shifted operator requires tau > 0");
  // 1 + s iτΔ_h/2 with stencil (1, -2, 1)/h²
  const double s = sign == ShiftSign::plus ? 1.0 : -1.0;
  const double r = tau / (2.0 * grid.h() * grid.h());
  const Complex diag(1.0, -2.0 * s * r);
  const Complex off(0.0, s * r);
  return ToeplitzTridiagonal(grid.interior_count(), diag, off);
}

}  // namespace

CayleyOps::CayleyOps(const GridSpec& grid, double tau)
  : grid_(grid), tau_(tau),
    plus_(shifted_matrix(grid, tau, ShiftSign::plus)),
    minus_(shifted_matrix(grid, tau, ShiftSign::minus))
{}

StateVector CayleyOps::apply_shifted(const StateVector& u, ShiftSign sign) const
{
  require_size(u, grid_, "apply_shifted");
  return sign == ShiftSign::plus ? plus_.apply(u) : minus_.apply(u);
}

StateVector CayleyOps::solve_shifted(const StateVector& u, ShiftSign sign) const
{
  require_size(u, grid_, "solve_shifted");
  return sign == ShiftSign::plus ? plus_.solve(u) : minus_.solve(u);
}

StateVector CayleyOps::s_tau(const StateVector& u) const
{
  return minus_.solve(apply_shifted(u, ShiftSign::plus));
}

StateVector CayleyOps::t_tau(const StateVector& u) const
{
  return solve_shifted(u, ShiftSign::minus);
}

StateVector CayleyOps::s_tau_inverse(const StateVector& u) const
{
  return plus_.solve(apply_shifted(u, ShiftSign::minus));
}

StateVector solve_shifted(const StateVector& u, const GridSpec& grid, double tau, ShiftSign sign)
{
  return CayleyOps(grid, tau).solve_shifted(u, sign);
}

StateVector cayley_apply(const StateVector& u, const GridSpec& grid, double tau)
{
  return CayleyOps(grid, tau).s_tau(u);
}

StateVector exact_semigroup(const StateVector& u, double t, const GridSpec& grid)
{
  require_size(u, grid, "exact_semigroup");
  if(t == 0.0)
    return u;
  const SineBasis basis(grid);
  auto c = basis.forward(u);
  const auto& eig = basis.eigenvalues();
  for(std::size_t k = 0; k < c.size(); ++k)
    c[k] *= std::polar(1.0, t * eig[k]);
  return basis.inverse(c);
}

double operator_deviation(int n, double tau, const GridSpec& grid, const StateVector& probe)
{
  if(n < 0)
    throw Error("operator_deviation requires n >= 0");
  if(n == 0)
    return 0.0;
  const CayleyOps ops(grid, tau);
  StateVector discrete = probe;
  for(int m = 0; m < n; ++m)
    discrete = ops.s_tau(discrete);
  const StateVector exact = exact_semigroup(probe, n * tau, grid);
  return discrete_l2_norm(exact - discrete, grid);
}

double resolvent_deviation(int n, double tau, const GridSpec& grid, const StateVector& probe)
{
  if(n < 0)
    throw Error("resolvent_deviation requires n >= 0");
  const CayleyOps ops(grid, tau);
  StateVector discrete = ops.t_tau(probe);
  for(int m = 0; m < n; ++m)
    discrete = ops.s_tau_inverse(discrete);
  const StateVector exact = exact_semigroup(probe, -n * tau, grid);
  return discrete_l2_norm(exact - discrete, grid);
}

}  // namespace snls
