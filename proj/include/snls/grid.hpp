#ifndef SNLS_GRID_HPP
#define SNLS_GRID_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace snls {

using Complex = std::complex<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Uniform mesh on (0,1). Only the interior nodes x_j = j*h, j = 1..n_cells-1,
/// carry unknowns; the Dirichlet boundary values are implicit zeros.
class GridSpec
{
public:
  explicit GridSpec(int n_cells = 64);

  int n_cells() const { return n_cells_; }
  double h() const { return h_; }
  std::size_t interior_count() const { return static_cast<std::size_t>(n_cells_ - 1); }

  /// Coordinate of the interior node stored at zero-based position i (node j = i+1).
  double node(std::size_t i) const { return static_cast<double>(i + 1) * h_; }
  /// Coordinate of the half-grid point between stored positions i-1 and i
  /// (x_{j-1/2} with j = i+1); i ranges over 0..n_cells-1.
  double half_node(std::size_t i) const { return (static_cast<double>(i) + 0.5) * h_; }

  bool operator==(const GridSpec&) const = default;

private:
  int n_cells_;
  double h_;
};

/// Uniform time mesh t_n = n*tau, n = 0..n_steps.
class TimeGrid
{
public:
  TimeGrid(double tau = 0.0078125, int n_steps = 64);

  /// Builds the grid covering [0, horizon]; horizon/tau must be an integer up to rounding.
  static TimeGrid from_horizon(double horizon, double tau);

  double tau() const { return tau_; }
  int n_steps() const { return n_steps_; }
  double horizon() const { return tau_ * n_steps_; }
  double t(int n) const { return tau_ * n; }

  bool operator==(const TimeGrid&) const = default;

private:
  double tau_;
  int n_steps_;
};

/// Complex field values on the interior nodes.
class StateVector
{
public:
  StateVector() = default;
  explicit StateVector(std::size_t n, Complex value = {}) : values_(n, value) {}
  explicit StateVector(std::vector<Complex> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  Complex& operator[](std::size_t i) { return values_[i]; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  std::span<Complex> values() { return values_; }
  std::span<const Complex> values() const { return values_; }

  bool all_finite() const;

  StateVector& operator+=(const StateVector& other);
  StateVector& operator-=(const StateVector& other);
  StateVector& operator*=(Complex a);

  bool operator==(const StateVector&) const = default;

private:
  std::vector<Complex> values_;
};

StateVector operator+(StateVector a, const StateVector& b);
StateVector operator-(StateVector a, const StateVector& b);
StateVector operator*(Complex a, StateVector v);

/// Coefficients of  i du + (Δu + θ|x|²u + λ|u|^{2σ}u) dt = ε dW.
/// The noise amplitude ε is owned by NoiseSpec.
struct ModelParams
{
  double theta = 1.0;
  double lambda = 1.0;
  double sigma = 1.0;
  /// Permits λ = 0 (linear benchmark runs).
  bool allow_linear = false;

  void validate() const;
  bool operator==(const ModelParams&) const = default;
};

enum class InitialKind { sine, custom_samples };

/// u0 sampled on the interior nodes: sin(πx_j) for the sine kind, or the given samples.
StateVector initial_condition(const GridSpec& grid, InitialKind kind,
                              std::span<const Complex> samples = {});

/// sqrt(h Σ |u_j|²)
double discrete_l2_norm(const StateVector& u, const GridSpec& grid);

/// Real inner product Re(h Σ u_j conj(v_j)).
double real_inner(const StateVector& u, const StateVector& v, const GridSpec& grid);

void require_size(const StateVector& u, const GridSpec& grid, const char* what);

}  // namespace snls

#endif
