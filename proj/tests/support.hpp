#ifndef SNLS_TESTS_SUPPORT_HPP
#define SNLS_TESTS_SUPPORT_HPP

#include <cmath>
#include <numbers>
#include <random>

#include "snls/grid.hpp"
#include "snls/noise.hpp"

namespace snls::test {

inline StateVector random_state(const GridSpec& grid, Rng& rng, double scale = 1.0)
{
  std::normal_distribution<double> normal(0.0, scale);
  StateVector u(grid.interior_count());
  for(auto& z : u)
  {
    const double re = normal(rng);
    z = Complex(re, normal(rng));
  }
  return u;
}

/// O(1) combination of the first `modes` sine modes with 1/k decay.
inline StateVector random_smooth_state(const GridSpec& grid, Rng& rng, int modes = 8)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  StateVector u(grid.interior_count());
  for(int k = 1; k <= modes; ++k)
  {
    const double re = normal(rng);
    const Complex c(re, normal(rng));
    for(std::size_t i = 0; i < u.size(); ++i)
      u[i] += c / static_cast<double>(k) * std::sin(std::numbers::pi * k * grid.node(i));
  }
  return u;
}

inline StateVector sine_mode(const GridSpec& grid, int k, Complex scale = 1.0)
{
  StateVector u(grid.interior_count());
  for(std::size_t i = 0; i < u.size(); ++i)
    u[i] = scale * std::sin(std::numbers::pi * k * grid.node(i));
  return u;
}

inline double max_abs_diff(const StateVector& a, const StateVector& b)
{
  double m = 0.0;
  for(std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Complex inner product h Σ u_j conj(v_j).
inline Complex inner(const StateVector& u, const StateVector& v, const GridSpec& grid)
{
  Complex s{};
  for(std::size_t i = 0; i < u.size(); ++i)
    s += u[i] * std::conj(v[i]);
  return grid.h() * s;
}

}  // namespace snls::test

#endif
