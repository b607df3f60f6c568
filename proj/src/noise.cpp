#include "snls/noise.hpp"

#include <cmath>
#include <numbers>

namespace snls {

double NoiseSpec::amplitude(int k) const
{
  return std::pow(static_cast<double>(k), -decay);
}

void NoiseSpec::validate() const
{
  if(n_modes < 1)
    throw Error("n_modes must be at least 1");
  if(!(decay > 0.0) || !std::isfinite(decay))
    throw Error("decay must be positive");
  if(!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw Error("epsilon must be nonnegative");
}

std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t stream_index)
{
  std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ull * (stream_index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

NoiseField::NoiseField(const NoiseSpec& spec, const GridSpec& grid)
  : spec_(spec), n_nodes_(grid.interior_count())
{
  spec_.validate();
  table_.resize(static_cast<std::size_t>(spec_.n_modes) * n_nodes_);
  for(int k = 1; k <= spec_.n_modes; ++k)
  {
    const double a = spec_.epsilon * spec_.amplitude(k);
    double* row = table_.data() + static_cast<std::size_t>(k - 1) * n_nodes_;
    for(std::size_t i = 0; i < n_nodes_; ++i)
      row[i] = a * std::sin(std::numbers::pi * k * grid.node(i));
  }
}

void NoiseField::draw_coefficients(double tau, Rng& rng, std::span<Complex> out) const
{
  if(!(tau > 0.0))
    throw Error("noise increment requires tau > 0");
  if(out.size() != static_cast<std::size_t>(spec_.n_modes))
    throw Error("coefficient buffer has wrong length");
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::sqrt(tau);
  for(auto& xi : out)
  {
    const double re = scale * normal(rng);
    const double im = spec_.kind == NoiseKind::complex ? scale * normal(rng) : 0.0;
    xi = Complex(re, im);
  }
}

WienerIncrement NoiseField::synthesize(std::span<const Complex> xi, long step_index) const
{
  if(xi.size() != static_cast<std::size_t>(spec_.n_modes))
    throw Error("coefficient vector has wrong length");
  WienerIncrement inc{StateVector(n_nodes_), step_index};
  if(spec_.epsilon == 0.0)
    return inc;
  for(int k = 0; k < spec_.n_modes; ++k)
  {
    const double* row = table_.data() + static_cast<std::size_t>(k) * n_nodes_;
    const double re = xi[k].real();
    const double im = xi[k].imag();
    for(std::size_t i = 0; i < n_nodes_; ++i)
      inc.values[i] += Complex(row[i] * re, row[i] * im);
  }
  return inc;
}

WienerIncrement sample_increment(const NoiseSpec& spec, const GridSpec& grid, double tau, Rng& rng,
                                 long step_index)
{
  NoiseField field(spec, grid);
  std::vector<Complex> xi(spec.n_modes);
  field.draw_coefficients(tau, rng, xi);
  return field.synthesize(xi, step_index);
}

IncrementStream::IncrementStream(const NoiseSpec& spec, const GridSpec& grid, double fine_tau,
                                 int substeps, std::uint64_t seed)
  : field_(spec, grid), fine_tau_(fine_tau), substeps_(substeps), rng_(seed),
    draw_(spec.n_modes), sum_(spec.n_modes)
{
  if(!(fine_tau > 0.0))
    throw Error("noise increment requires tau > 0");
  if(substeps < 1)
    throw Error("substeps must be at least 1");
}

WienerIncrement IncrementStream::next()
{
  std::fill(sum_.begin(), sum_.end(), Complex{});
  for(int s = 0; s < substeps_; ++s)
  {
    field_.draw_coefficients(fine_tau_, rng_, draw_);
    for(std::size_t k = 0; k < sum_.size(); ++k)
      sum_[k] += draw_[k];
  }
  return field_.synthesize(sum_, step_++);
}

double hs_norm_squared(const NoiseSpec& spec, int derivative_order)
{
  if(derivative_order != 0 && derivative_order != 1)
    throw Error("hs_norm_squared supports derivative order 0 or 1 only");
  spec.validate();
  double sum = 0.0;
  for(int k = 1; k <= spec.n_modes; ++k)
  {
    const double a2 = std::pow(static_cast<double>(k), -2.0 * spec.decay);
    double e2 = 0.5;
    if(derivative_order == 1)
    {
      const double pk = std::numbers::pi * k;
      e2 += 0.5 * pk * pk;
    }
    sum += a2 * e2;
  }
  return spec.epsilon * spec.epsilon * sum;
}

std::vector<Complex> sine_projection(const StateVector& u, const GridSpec& grid, int n_modes)
{
  std::vector<Complex> c(n_modes);
  for(int k = 1; k <= n_modes; ++k)
  {
    Complex sum{};
    for(std::size_t i = 0; i < u.size(); ++i)
      sum += u[i] * std::sin(std::numbers::pi * k * grid.node(i));
    c[k - 1] = 2.0 * grid.h() * sum;
  }
  return c;
}

}  // namespace snls
