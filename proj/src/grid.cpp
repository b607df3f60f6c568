#include "snls/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace snls {

GridSpec::GridSpec(int n_cells)
  : n_cells_(n_cells), h_(0.0)
{
  if(n_cells < 2)
    throw Error("n_cells must be at least 2 (need one interior node), got " + std::to_string(n_cells));
  h_ = 1.0 / n_cells;
}

TimeGrid::TimeGrid(double tau, int n_steps)
  : tau_(tau), n_steps_(n_steps)
{
  if(!(tau > 0.0) || !std::isfinite(tau))
    throw Error("tau must be positive");
  if(n_steps < 1)
    throw Error("n_steps must be at least 1");
}

TimeGrid TimeGrid::from_horizon(double horizon, double tau)
{
  if(!(tau > 0.0) || !std::isfinite(tau))
    throw Error("tau must be positive");
  if(!(horizon > 0.0) || !std::isfinite(horizon))
    throw Error("horizon must be positive");
  const double ratio = horizon / tau;
  const double steps = std::round(ratio);
  if(steps < 1.0 || std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio))
  {
    std::ostringstream msg;
    msg.precision(17);
    msg << "horizon " << horizon << " is not an integer multiple of tau " << tau;
    throw Error(msg.str());
  }
  return TimeGrid(tau, static_cast<int>(steps));
}

bool StateVector::all_finite() const
{
  for(const auto& z : values_)
    if(!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      return false;
  return true;
}

StateVector& StateVector::operator+=(const StateVector& other)
{
  if(other.size() != size())
    throw Error("StateVector size mismatch in +=");
  for(std::size_t i = 0; i < size(); ++i)
    values_[i] += other.values_[i];
  return *this;
}

StateVector& StateVector::operator-=(const StateVector& other)
{
  if(other.size() != size())
    throw Error("StateVector size mismatch in -=");
  for(std::size_t i = 0; i < size(); ++i)
    values_[i] -= other.values_[i];
  return *this;
}

StateVector& StateVector::operator*=(Complex a)
{
  for(auto& z : values_)
    z *= a;
  return *this;
}

StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
StateVector operator*(Complex a, StateVector v) { return v *= a; }

void ModelParams::validate() const
{
  if(!std::isfinite(theta))
    throw Error("theta must be finite");
  if(!std::isfinite(lambda))
    throw Error("lambda must be finite");
  if(lambda == 0.0 && !allow_linear)
    throw Error("lambda must be nonzero (set allow_linear for the linear benchmark)");
  if(!(sigma > 0.0 && sigma < 2.0))
    throw Error("sigma must lie in (0,2)");
}

StateVector initial_condition(const GridSpec& grid, InitialKind kind, std::span<const Complex> samples)
{
  const std::size_t n = grid.interior_count();
  if(kind == InitialKind::custom_samples)
  {
    if(samples.size() != n)
      throw Error("custom initial condition has " + std::to_string(samples.size()) +
                  " samples, grid has " + std::to_string(n) + " interior nodes");
    return StateVector(std::vector<Complex>(samples.begin(), samples.end()));
  }
  StateVector u(n);
  for(std::size_t i = 0; i < n; ++i)
    u[i] = std::sin(std::numbers::pi * grid.node(i));
  return u;
}

double discrete_l2_norm(const StateVector& u, const GridSpec& grid)
{
  double sum = 0.0;
  for(const auto& z : u)
    sum += std::norm(z);
  return std::sqrt(grid.h() * sum);
}

double real_inner(const StateVector& u, const StateVector& v, const GridSpec& grid)
{
  double sum = 0.0;
  for(std::size_t i = 0; i < u.size(); ++i)
    sum += (u[i] * std::conj(v[i])).real();
  return grid.h() * sum;
}

void require_size(const StateVector& u, const GridSpec& grid, const char* what)
{
  if(u.size() != grid.interior_count())
    throw Error(std::string(what) + ": length " + std::to_string(u.size()) +
                " does not match interior node count " + std::to_string(grid.interior_count()));
}

}  // namespace snls
