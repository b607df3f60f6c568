#include "snls/schemes.hpp"

#include <cmath>
#include <sstream>

namespace snls {

namespace {

constexpr Complex I{0.0, 1.0};

double l2(const StateVector& u, const GridSpec& grid) { return discrete_l2_norm(u, grid); }

double bump_g(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

// Picard iteration w <- map(w) until successive iterates differ by at most tol.
template <class Map>
StateVector fixed_point(StateVector w, Map&& map, double tol, int max_iter, const GridSpec& grid,
                        StepStats* stats)
{
  if(stats)
    stats->increments.clear();
  double increment = 0.0;
  for(int m = 1; m <= max_iter; ++m)
  {
    StateVector next = map(w);
    increment = l2(next - w, grid);
    if(stats)
    {
      stats->iterations = m;
      stats->increments.push_back(increment);
    }
    w = std::move(next);
    if(!std::isfinite(increment))
      throw NumericalBreakdown("non-finite iterate in fixed-point solve");
    if(increment <= tol)
      return w;
  }
  throw NonConvergence(max_iter, increment);
}

void check_step_inputs(const StateVector& u, const WienerIncrement& dW, const GridSpec& grid)
{
  require_size(u, grid, "scheme step state");
  require_size(dW.values, grid, "scheme step noise increment");
}

StateVector finish(StateVector w, const StateVector& u)
{
  // u_{n+1} = 2 w - u_n
  for(std::size_t i = 0; i < w.size(); ++i)
    w[i] = 2.0 * w[i] - u[i];
  if(!w.all_finite())
    throw NumericalBreakdown("scheme step produced a non-finite state");
  return w;
}

}  // namespace

void SchemeConfig::validate() const
{
  if(!(fp_tol > 0.0))
    throw Error("fp_tol must be positive");
  if(fp_max_iter < 1)
    throw Error("fp_max_iter must be at least 1");
  if(scheme == SchemeKind::truncated_midpoint && !(truncation_radius > 0.0))
    throw Error("truncation_radius must be positive for the truncated scheme");
}

NonConvergence::NonConvergence(int iterations, double last_increment)
  : Error([&] {
      std::ostringstream msg;
      msg << "fixed-point iteration did not converge in " << iterations
          << " sweeps (last increment " << last_increment << "); reduce tau";
      return msg.str();
    }()),
    iterations_(iterations), last_increment_(last_increment)
{}

double cutoff(double r, CutoffKind kind)
{
  if(r <= 1.0)
    return 1.0;
  if(r >= 2.0)
    return 0.0;
  if(kind == CutoffKind::hard_clip)
    return 2.0 - r;
  const double a = bump_g(2.0 - r);
  const double b = bump_g(r - 1.0);
  return a / (a + b);
}

double discrete_h1_norm(const StateVector& u, const GridSpec& grid)
{
  const std::size_t n = u.size();
  double mass = 0.0;
  double grad = 0.0;
  Complex prev{};
  for(std::size_t i = 0; i < n; ++i)
  {
    mass += std::norm(u[i]);
    grad += std::norm(u[i] - prev);
    prev = u[i];
  }
  grad += std::norm(prev);
  const double h = grid.h();
  return std::sqrt(h * mass + grad / h);
}

std::vector<Complex> half_grid_values(const StateVector& u)
{
  const std::size_t n = u.size();
  std::vector<Complex> half(n + 1);
  for(std::size_t i = 0; i <= n; ++i)
  {
    const Complex left = i > 0 ? u[i - 1] : Complex{};
    const Complex right = i < n ? u[i] : Complex{};
    half[i] = 0.5 * (left + right);
  }
  return half;
}

Stepper::Stepper(const GridSpec& grid, const ModelParams& params, double tau, const SchemeConfig& cfg)
  : grid_(grid), params_(params), tau_(tau), cfg_(cfg), cayley_(grid, tau),
    averaging_(grid.interior_count(), 1.0, 0.5),
    ms_matrix_(grid.interior_count(), Complex(1.0, 2.0 * tau / (grid.h() * grid.h())),
               Complex(0.5, -tau / (grid.h() * grid.h()))),
    x2_nodes_(grid.interior_count()), x2_half_(grid.interior_count() + 1)
{
  params_.validate();
  cfg_.validate();
  if(cfg_.scheme == SchemeKind::truncated_midpoint && params_.sigma != 1.0)
    throw Error("the truncated scheme requires sigma = 1");
  for(std::size_t i = 0; i < x2_nodes_.size(); ++i)
    x2_nodes_[i] = grid.node(i) * grid.node(i);
  for(std::size_t i = 0; i < x2_half_.size(); ++i)
    x2_half_[i] = grid.half_node(i) * grid.half_node(i);
}

StateVector Stepper::step(const StateVector& u, const WienerIncrement& dW, StepStats* stats) const
{
  switch(cfg_.scheme)
  {
  case SchemeKind::midpoint:
    return midpoint(u, dW, stats);
  case SchemeKind::truncated_midpoint:
    return truncated_midpoint(u, dW, stats);
  case SchemeKind::multisymplectic:
    return multisymplectic(u, dW, stats);
  }
  throw Error("unknown scheme");
}

// θ|x|²w + s·λ|w|^{2σ}w
StateVector Stepper::midpoint_drift(const StateVector& w, double nonlinear_scale) const
{
  StateVector out(w.size());
  const double lam = params_.lambda * nonlinear_scale;
  for(std::size_t i = 0; i < w.size(); ++i)
  {
    const double a2 = std::norm(w[i]);
    const double nl = params_.sigma == 1.0 ? a2 : std::pow(a2, params_.sigma);
    out[i] = (params_.theta * x2_nodes_[i] + lam * nl) * w[i];
  }
  return out;
}

StateVector Stepper::midpoint(const StateVector& u, const WienerIncrement& dW, StepStats* stats) const
{
  check_step_inputs(u, dW, grid_);
  // w = T_τ[u + (iτ/2)(θ|x|²w + λ|w|^{2σ}w) - (i/2)ΔW]
  StateVector base = u;
  for(std::size_t i = 0; i < u.size(); ++i)
    base[i] -= 0.5 * I * dW.values[i];
  const double tol = cfg_.fp_tol * (1.0 + l2(u, grid_));
  const Complex half_itau = 0.5 * I * tau_;
  auto map = [&](const StateVector& w) {
    StateVector rhs = midpoint_drift(w, 1.0);
    for(std::size_t i = 0; i < rhs.size(); ++i)
      rhs[i] = base[i] + half_itau * rhs[i];
    return cayley_.t_tau(rhs);
  };
  StateVector w = fixed_point(u, map, tol, cfg_.fp_max_iter, grid_, stats);
  StateVector next = finish(std::move(w), u);
  if(stats)
    stats->residual = midpoint_residual(u, next, dW, 1.0);
  return next;
}

double Stepper::cutoff_factor(const StateVector& w) const
{
  if(cfg_.scheme != SchemeKind::truncated_midpoint)
    return 1.0;
  return cutoff(discrete_h1_norm(w, grid_) / cfg_.truncation_radius, cfg_.cutoff);
}

StateVector Stepper::truncated_midpoint(const StateVector& u, const WienerIncrement& dW,
                                        StepStats* stats) const
{
  check_step_inputs(u, dW, grid_);
  if(params_.sigma != 1.0)
    throw Error("the truncated scheme requires sigma = 1");
  // Mild form: u⁺ = S_τu + iτθT_τ(|x|²w) + iτλT_τ f(w) - iT_τΔW,  w = (u + u⁺)/2,
  // f(w) = μ_R(w)|w|²w.
  const StateVector s_u = cayley_.s_tau(u);
  const StateVector t_dw = cayley_.t_tau(dW.values);
  const double R = cfg_.truncation_radius;
  const Complex itau = I * tau_;
  auto map = [&](const StateVector& w) {
    const double mu = cutoff(discrete_h1_norm(w, grid_) / R, cfg_.cutoff);
    StateVector forcing(w.size());
    for(std::size_t i = 0; i < w.size(); ++i)
      forcing[i] = itau * (params_.theta * x2_nodes_[i] + params_.lambda * mu * std::norm(w[i])) * w[i];
    const StateVector t_forcing = cayley_.t_tau(forcing);
    StateVector w_next(w.size());
    for(std::size_t i = 0; i < w.size(); ++i)
    {
      const Complex u_next = s_u[i] + t_forcing[i] - I * t_dw[i];
      w_next[i] = 0.5 * (u[i] + u_next);
    }
    return w_next;
  };
  const double tol = cfg_.fp_tol * (1.0 + l2(u, grid_));
  StateVector w = fixed_point(u, map, tol, cfg_.fp_max_iter, grid_, stats);
  const double mu = cutoff(discrete_h1_norm(w, grid_) / R, cfg_.cutoff);
  StateVector next = finish(std::move(w), u);
  if(stats)
    stats->residual = midpoint_residual(u, next, dW, mu);
  return next;
}

// G_j = g_{j+1/2} + g_{j-1/2},  g_k = (θ x_k² + λ|w_k|^{2σ}) w_k on the half grid.
StateVector Stepper::multisym_drift(const std::vector<Complex>& half) const
{
  std::vector<Complex> g(half.size());
  for(std::size_t k = 0; k < half.size(); ++k)
  {
    const double a2 = std::norm(half[k]);
    const double nl = params_.sigma == 1.0 ? a2 : std::pow(a2, params_.sigma);
    g[k] = (params_.theta * x2_half_[k] + params_.lambda * nl) * half[k];
  }
  StateVector out(half.size() - 1);
  for(std::size_t i = 0; i < out.size(); ++i)
    out[i] = g[i] + g[i + 1];
  return out;
}

StateVector Stepper::multisymplectic(const StateVector& u, const WienerIncrement& dW,
                                     StepStats* stats) const
{
  check_step_inputs(u, dW, grid_);
  // (B - iτΔ_h) w = B(u - (i/2)ΔW) + (iτ/2) G(w)
  StateVector shifted = u;
  for(std::size_t i = 0; i < u.size(); ++i)
    shifted[i] -= 0.5 * I * dW.values[i];
  const StateVector base = averaging_.apply(shifted);
  const Complex half_itau = 0.5 * I * tau_;
  auto map = [&](const StateVector& w) {
    StateVector rhs = multisym_drift(half_grid_values(w));
    for(std::size_t i = 0; i < rhs.size(); ++i)
      rhs[i] = base[i] + half_itau * rhs[i];
    return ms_matrix_.solve(rhs);
  };
  const double tol = cfg_.fp_tol * (1.0 + l2(u, grid_));
  StateVector w = fixed_point(u, map, tol, cfg_.fp_max_iter, grid_, stats);
  StateVector next = finish(std::move(w), u);
  if(stats)
    stats->residual = multisym_residual(u, next, dW);
  return next;
}

StateVector Stepper::tangent(const StateVector& u_n, const StateVector& u_np1, const StateVector& xi,
                             StepStats* stats) const
{
  require_size(u_n, grid_, "tangent base state");
  require_size(u_np1, grid_, "tangent base state");
  require_size(xi, grid_, "tangent vector");
  if(params_.sigma != 1.0)
    throw Error("the tangent map requires sigma = 1");
  // ζ = T_τ[ξ + (iτ/2)(θ|x|²ζ + λ(2|w|²ζ + w² conj ζ))],  ξ⁺ = 2ζ - ξ
  StateVector w = u_n + u_np1;
  w *= 0.5;
  const Complex half_itau = 0.5 * I * tau_;
  auto map = [&](const StateVector& zeta) {
    StateVector rhs(zeta.size());
    for(std::size_t i = 0; i < zeta.size(); ++i)
    {
      const Complex lin = (params_.theta * x2_nodes_[i] + 2.0 * params_.lambda * std::norm(w[i])) * zeta[i] +
                          params_.lambda * w[i] * w[i] * std::conj(zeta[i]);
      rhs[i] = xi[i] + half_itau * lin;
    }
    return cayley_.t_tau(rhs);
  };
  const double tol = cfg_.fp_tol * (1.0 + l2(xi, grid_));
  StateVector zeta = fixed_point(xi, map, tol, cfg_.fp_max_iter, grid_, stats);
  StateVector next = finish(std::move(zeta), xi);
  if(stats)
    stats->residual = tangent_residual(u_n, u_np1, xi, next);
  return next;
}

double Stepper::midpoint_residual(const StateVector& u_n, const StateVector& u_np1,
                                  const WienerIncrement& dW, double nonlinear_scale) const
{
  // i(u⁺ - u) + τ(Δ_h w + θ|x|²w + λμ|w|^{2σ}w) - ΔW
  StateVector w = u_n + u_np1;
  w *= 0.5;
  const StateVector lap = apply_laplacian(w, grid_);
  const StateVector drift = midpoint_drift(w, nonlinear_scale);
  StateVector r(w.size());
  for(std::size_t i = 0; i < w.size(); ++i)
    r[i] = I * (u_np1[i] - u_n[i]) + tau_ * (lap[i] + drift[i]) - dW.values[i];
  return l2(r, grid_);
}

double Stepper::multisym_residual(const StateVector& u_n, const StateVector& u_np1,
                                  const WienerIncrement& dW) const
{
  // iB(u⁺ - u) + τ(2Δ_h w + G(w)) - BΔW
  StateVector w = u_n + u_np1;
  w *= 0.5;
  const StateVector db = averaging_.apply(u_np1 - u_n);
  const StateVector lap = apply_laplacian(w, grid_);
  const StateVector drift = multisym_drift(half_grid_values(w));
  const StateVector noise = averaging_.apply(dW.values);
  StateVector r(w.size());
  for(std::size_t i = 0; i < w.size(); ++i)
    r[i] = I * db[i] + tau_ * (2.0 * lap[i] + drift[i]) - noise[i];
  return l2(r, grid_);
}

double Stepper::residual(const StateVector& u_n, const StateVector& u_np1, const WienerIncrement& dW) const
{
  switch(cfg_.scheme)
  {
  case SchemeKind::midpoint:
    return midpoint_residual(u_n, u_np1, dW, 1.0);
  case SchemeKind::truncated_midpoint:
  {
    StateVector w = u_n + u_np1;
    w *= 0.5;
    return midpoint_residual(u_n, u_np1, dW, cutoff_factor(w));
  }
  case SchemeKind::multisymplectic:
    return multisym_residual(u_n, u_np1, dW);
  }
  throw Error("unknown scheme");
}

double Stepper::tangent_residual(const StateVector& u_n, const StateVector& u_np1, const StateVector& xi_n,
                                 const StateVector& xi_np1) const
{
  StateVector w = u_n + u_np1;
  w *= 0.5;
  StateVector zeta = xi_n + xi_np1;
  zeta *= 0.5;
  const StateVector lap = apply_laplacian(zeta, grid_);
  StateVector r(w.size());
  for(std::size_t i = 0; i < w.size(); ++i)
  {
    const Complex lin = (params_.theta * x2_nodes_[i] + 2.0 * params_.lambda * std::norm(w[i])) * zeta[i] +
                        params_.lambda * w[i] * w[i] * std::conj(zeta[i]);
    r[i] = I * (xi_np1[i] - xi_n[i]) + tau_ * (lap[i] + lin);
  }
  return l2(r, grid_);
}

namespace {

SchemeConfig with_scheme(SchemeConfig cfg, SchemeKind kind)
{
  cfg.scheme = kind;
  return cfg;
}

}  // namespace

StateVector midpoint_step(const StateVector& u_n, const WienerIncrement& dW, const ModelParams& params,
                          const GridSpec& grid, double tau, const SchemeConfig& cfg)
{
  return Stepper(grid, params, tau, with_scheme(cfg, SchemeKind::midpoint)).midpoint(u_n, dW);
}

StateVector truncated_midpoint_step(const StateVector& u_n, const WienerIncrement& dW,
                                    const ModelParams& params, const GridSpec& grid, double tau,
                                    const SchemeConfig& cfg)
{
  return Stepper(grid, params, tau, with_scheme(cfg, SchemeKind::truncated_midpoint))
      .truncated_midpoint(u_n, dW);
}

StateVector multisymplectic_step(const StateVector& u_n, const WienerIncrement& dW,
                                 const ModelParams& params, const GridSpec& grid, double tau,
                                 const SchemeConfig& cfg)
{
  return Stepper(grid, params, tau, with_scheme(cfg, SchemeKind::multisymplectic)).multisymplectic(u_n, dW);
}

StateVector tangent_step(const StateVector& u_n, const StateVector& u_np1, const StateVector& xi_n,
                         const ModelParams& params, const GridSpec& grid, double tau,
                         const SchemeConfig& cfg)
{
  return Stepper(grid, params, tau, with_scheme(cfg, SchemeKind::midpoint)).tangent(u_n, u_np1, xi_n);
}

std::string to_string(SchemeKind kind)
{
  switch(kind)
  {
  case SchemeKind::midpoint: return "midpoint";
  case SchemeKind::truncated_midpoint: return "truncated-midpoint";
  case SchemeKind::multisymplectic: return "multi-symplectic";
  }
  return "unknown";
}

std::string to_string(CutoffKind kind)
{
  return kind == CutoffKind::smooth_bump ? "smooth-bump" : "hard-clip";
}

SchemeKind scheme_from_string(const std::string& name)
{
  if(name == "midpoint")
    return SchemeKind::midpoint;
  if(name == "truncated-midpoint")
    return SchemeKind::truncated_midpoint;
  if(name == "multi-symplectic")
    return SchemeKind::multisymplectic;
  throw Error("unknown scheme '" + name + "' (expected midpoint, truncated-midpoint or multi-symplectic)");
}

CutoffKind cutoff_from_string(const std::string& name)
{
  if(name == "smooth-bump")
    return CutoffKind::smooth_bump;
  if(name == "hard-clip")
    return CutoffKind::hard_clip;
  throw Error("unknown cutoff '" + name + "' (expected smooth-bump or hard-clip)");
}

}  // namespace snls
