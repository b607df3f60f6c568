#include "snls/observables.hpp"

#include <cmath>

namespace snls {

namespace {

double power_abs(double abs2, double sigma)
{
  // |u|^{2σ} from |u|²
  return sigma == 1.0 ? abs2 : std::pow(abs2, sigma);
}

// Sample values at whichever points the form integrates over, with their x coordinates.
struct Samples
{
  std::vector<Complex> values;
  std::vector<double> x;
};

Samples samples_for(const StateVector& u, const GridSpec& grid, bool half)
{
  Samples s;
  if(half)
  {
    s.values = half_grid_values(u);
    s.x.resize(s.values.size());
    for(std::size_t k = 0; k < s.x.size(); ++k)
      s.x[k] = grid.half_node(k);
  }
  else
  {
    s.values.assign(u.begin(), u.end());
    s.x.resize(u.size());
    for(std::size_t i = 0; i < u.size(); ++i)
      s.x[i] = grid.node(i);
  }
  return s;
}

}  // namespace

double charge(const StateVector& u, const GridSpec& grid, ChargeForm form)
{
  if(form == ChargeForm::node)
  {
    double sum = 0.0;
    for(const auto& z : u)
      sum += std::norm(z);
    return grid.h() * sum;
  }
  double sum = 0.0;
  for(const auto& z : half_grid_values(u))
    sum += std::norm(z);
  return grid.h() * sum;
}

double energy(const StateVector& u, const GridSpec& grid, const ModelParams& params, EnergyForm form)
{
  const double h = grid.h();
  double kinetic = 0.0;
  Complex prev{};
  for(const auto& z : u)
  {
    kinetic += std::norm(z - prev);
    prev = z;
  }
  kinetic += std::norm(prev);
  kinetic /= h * h;

  const Samples s = samples_for(u, grid, form == EnergyForm::multisym);
  double potential = 0.0;
  double nonlinear = 0.0;
  for(std::size_t k = 0; k < s.values.size(); ++k)
  {
    const double a2 = std::norm(s.values[k]);
    potential += s.x[k] * s.x[k] * a2;
    nonlinear += a2 * power_abs(a2, params.sigma);
  }
  const double sigma = params.sigma;
  return 0.5 * h * kinetic - 0.5 * params.theta * h * potential -
         params.lambda / (2.0 * sigma + 2.0) * h * nonlinear;
}

ChargeForm charge_form_for(SchemeKind scheme)
{
  return scheme == SchemeKind::multisymplectic ? ChargeForm::half_grid : ChargeForm::node;
}

EnergyForm energy_form_for(SchemeKind scheme)
{
  return scheme == SchemeKind::multisymplectic ? EnergyForm::multisym : EnergyForm::semi;
}

double charge_recursion_residual(const StateVector& u_n, const StateVector& u_np1,
                                 const WienerIncrement& dW, const GridSpec& grid, SchemeKind scheme)
{
  require_size(u_n, grid, "charge_recursion_residual");
  require_size(u_np1, grid, "charge_recursion_residual");
  require_size(dW.values, grid, "charge_recursion_residual");
  const std::size_t n = u_n.size();
  const double h = grid.h();
  double source = 0.0;
  if(scheme == SchemeKind::multisymplectic)
  {
    const auto dw_half = half_grid_values(dW.values);
    for(std::size_t i = 0; i < n; ++i)
    {
      const Complex w = 0.5 * (u_n[i] + u_np1[i]);
      source += ((dw_half[i] + dw_half[i + 1]) * std::conj(w)).imag();
    }
    source *= h;
  }
  else
  {
    for(std::size_t i = 0; i < n; ++i)
    {
      const Complex w = 0.5 * (u_n[i] + u_np1[i]);
      source += (dW.values[i] * std::conj(w)).imag();
    }
    source *= 2.0 * h;
  }
  const ChargeForm form = charge_form_for(scheme);
  const double lhs = charge(u_np1, grid, form) - charge(u_n, grid, form);
  return std::abs(lhs - source);
}

double energy_recursion_residual(const StateVector& u_n, const StateVector& u_np1,
                                 const WienerIncrement& dW, const GridSpec& grid,
                                 const ModelParams& params, double tau, SchemeKind scheme,
                                 double cutoff_factor)
{
  require_size(u_n, grid, "energy_recursion_residual");
  require_size(u_np1, grid, "energy_recursion_residual");
  require_size(dW.values, grid, "energy_recursion_residual");
  if(!(tau > 0.0))
    throw Error("energy_recursion_residual requires tau > 0");
  const bool half = scheme == SchemeKind::multisymplectic;
  const double h = grid.h();
  const double sigma = params.sigma;

  const auto a = samples_for(u_n, grid, half).values;
  const auto b = samples_for(u_np1, grid, half).values;
  double exchange = 0.0;
  double power = 0.0;
  for(std::size_t k = 0; k < a.size(); ++k)
  {
    const Complex w = 0.5 * (a[k] + b[k]);
    const double a2 = std::norm(a[k]);
    const double b2 = std::norm(b[k]);
    exchange += power_abs(std::norm(w), sigma) * (b2 - a2);
    power += b2 * power_abs(b2, sigma) - a2 * power_abs(a2, sigma);
  }

  double work = 0.0;
  if(half)
  {
    const auto dw_half = half_grid_values(dW.values);
    for(std::size_t i = 0; i < u_n.size(); ++i)
      work += ((dw_half[i] + dw_half[i + 1]) * std::conj((u_np1[i] - u_n[i]) / tau)).real();
    work *= 0.5;
  }
  else
  {
    for(std::size_t i = 0; i < u_n.size(); ++i)
      work += (dW.values[i] * std::conj((u_np1[i] - u_n[i]) / tau)).real();
  }

  const double rhs = 0.5 * params.lambda * cutoff_factor * h * exchange -
                     params.lambda / (2.0 * sigma + 2.0) * h * power - h * work;
  const EnergyForm form = energy_form_for(scheme);
  const double lhs = energy(u_np1, grid, params, form) - energy(u_n, grid, params, form);
  return std::abs(lhs - rhs);
}

double symplectic_form(const StateVector& xi, const StateVector& eta, const GridSpec& grid)
{
  if(xi.size() != eta.size())
    throw Error("symplectic_form: size mismatch");
  double sum = 0.0;
  for(std::size_t i = 0; i < xi.size(); ++i)
    sum += xi[i].real() * eta[i].imag() - xi[i].imag() * eta[i].real();
  return grid.h() * sum;
}

void ObservableSeries::push(int step, double t, double m, double e, double charge_res, double energy_res)
{
  steps.push_back(step);
  times.push_back(t);
  charge.push_back(m);
  energy.push_back(e);
  charge_residual.push_back(charge_res);
  energy_residual.push_back(energy_res);
}

}  // namespace snls
