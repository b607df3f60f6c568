#include "snls/checks.hpp"

#include <cmath>
#include <numbers>

namespace snls {

namespace {

CheckResult check_le(std::string name, double value, double threshold)
{
  return {std::move(name), value, threshold, std::isfinite(value) && value <= threshold};
}

StateVector random_state(std::size_t n, Rng& rng)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  StateVector u(n);
  for(auto& z : u)
  {
    const double re = normal(rng);
    z = Complex(re, normal(rng));
  }
  return u;
}

StateVector sine_mode(const GridSpec& grid, int k, Complex scale)
{
  StateVector u(grid.interior_count());
  for(std::size_t i = 0; i < u.size(); ++i)
    u[i] = scale * std::sin(std::numbers::pi * k * grid.node(i));
  return u;
}

}  // namespace

bool all_passed(const std::vector<CheckResult>& checks)
{
  for(const auto& c : checks)
    if(!c.passed)
      return false;
  return true;
}

std::vector<CheckResult> run_invariant_suite(const RunConfig& cfg)
{
  cfg.validate();
  std::vector<CheckResult> out;
  const GridSpec& grid = cfg.grid;
  const double tau = cfg.time.tau();
  const double tol = cfg.scheme.fp_tol;
  const SchemeKind kind = cfg.scheme.scheme;
  const Stepper stepper(grid, cfg.params, tau, cfg.scheme);
  const ChargeForm cform = charge_form_for(kind);

  // Identity defects along trajectory 0 of the configured scheme.
  {
    IncrementStream noise(cfg.noise, grid, tau, 1, trajectory_seed(cfg, 0));
    StateVector u = cfg.initial_state();
    double charge_res = 0.0;
    double energy_res = 0.0;
    double solver_res = 0.0;
    double drift = 0.0;
    StepStats stats;
    for(int n = 0; n < cfg.time.n_steps(); ++n)
    {
      const WienerIncrement dW = noise.next();
      StateVector next = stepper.step(u, dW, &stats);
      const double mu = stepper.cutoff_factor(0.5 * (u + next));
      charge_res = std::max(charge_res, charge_recursion_residual(u, next, dW, grid, kind));
      energy_res = std::max(energy_res,
                            energy_recursion_residual(u, next, dW, grid, cfg.params, tau, kind, mu));
      solver_res = std::max(solver_res, stats.residual / (1.0 + discrete_l2_norm(u, grid)));
      const double m0 = charge(u, grid, cform);
      drift = std::max(drift, std::abs(charge(next, grid, cform) - m0) / m0);
      u = std::move(next);
    }
    out.push_back(check_le("solver residual / (1+|u|)", solver_res, tol));
    out.push_back(check_le("charge recursion residual", charge_res, 10.0 * tol));
    out.push_back(check_le("energy recursion residual", energy_res, 100.0 * tol));
    if(cfg.noise.epsilon == 0.0)
      out.push_back(check_le("relative charge drift per step", drift, 1e-10));
  }

  // Symplectic form carried by two tangent vectors along a mid-point path.
  if(cfg.params.sigma == 1.0)
  {
    SchemeConfig mid_cfg = cfg.scheme;
    mid_cfg.scheme = SchemeKind::midpoint;
    const Stepper mid(grid, cfg.params, tau, mid_cfg);
    IncrementStream noise(cfg.noise, grid, tau, 1, trajectory_seed(cfg, 0));
    StateVector u = cfg.initial_state();
    StateVector xi = sine_mode(grid, 1, 1.0);
    StateVector eta = sine_mode(grid, 1, Complex(0.0, 1.0)) + sine_mode(grid, 2, 0.5);
    const double omega0 = symplectic_form(xi, eta, grid);
    double omega = omega0;
    double step_change = 0.0;
    for(int n = 0; n < cfg.time.n_steps(); ++n)
    {
      const WienerIncrement dW = noise.next();
      StateVector next = mid.midpoint(u, dW);
      xi = mid.tangent(u, next, xi);
      eta = mid.tangent(u, next, eta);
      const double omega_next = symplectic_form(xi, eta, grid);
      step_change = std::max(step_change, std::abs(omega_next - omega));
      omega = omega_next;
      u = std::move(next);
    }
    out.push_back(check_le("symplectic form change per step", step_change, 100.0 * tol));
    out.push_back(check_le("symplectic form relative drift", std::abs(omega - omega0) / std::abs(omega0), 1e-8));
  }

  // Cayley transform facts on random states.
  {
    Rng rng(cfg.master_seed);
    const CayleyOps& ops = stepper.cayley();
    double unitarity = 0.0;
    double resolvent = 0.0;
    for(int r = 0; r < 100; ++r)
    {
      const StateVector v = random_state(grid.interior_count(), rng);
      const double nv = discrete_l2_norm(v, grid);
      const StateVector sv = ops.s_tau(v);
      unitarity = std::max(unitarity, std::abs(discrete_l2_norm(sv, grid) - nv) / nv);
      StateVector two_t = ops.t_tau(v);
      two_t *= 2.0;
      double worst = 0.0;
      for(std::size_t i = 0; i < v.size(); ++i)
        worst = std::max(worst, std::abs(sv[i] - (two_t[i] - v[i])));
      resolvent = std::max(resolvent, worst);
    }
    out.push_back(check_le("Cayley unitarity | |S u| - |u| | / |u|", unitarity, 1e-12));
    out.push_back(check_le("max |S u - (2T - I) u|", resolvent, 1e-12));
  }
  return out;
}

NoiseCheckReport run_noise_check(const RunConfig& cfg, int variance_samples, int covariance_pairs)
{
  cfg.validate();
  const GridSpec& grid = cfg.grid;
  const NoiseSpec& spec = cfg.noise;
  if(spec.n_modes >= grid.n_cells())
    throw Error("noise check needs n_modes < n_cells so the sine projection is exact");
  if(spec.epsilon == 0.0)
    throw Error("noise check needs epsilon > 0");
  if(variance_samples < 2 || covariance_pairs < 2)
    throw Error("noise check needs at least two samples");
  const double tau = cfg.time.tau();
  const int M = spec.n_modes;
  const std::size_t n = grid.interior_count();
  const bool complex_noise = spec.kind == NoiseKind::complex;

  std::vector<double> table(static_cast<std::size_t>(M) * n);
  for(int k = 1; k <= M; ++k)
    for(std::size_t i = 0; i < n; ++i)
      table[static_cast<std::size_t>(k - 1) * n + i] = std::sin(std::numbers::pi * k * grid.node(i));
  auto project = [&](const StateVector& u, std::vector<Complex>& c) {
    for(int k = 0; k < M; ++k)
    {
      const double* row = table.data() + static_cast<std::size_t>(k) * n;
      Complex sum{};
      for(std::size_t i = 0; i < n; ++i)
        sum += row[i] * u[i];
      c[k] = 2.0 * grid.h() * sum;
    }
  };

  NoiseCheckReport report;
  report.samples = variance_samples;
  const NoiseField field(spec, grid);
  std::vector<Complex> xi(M);
  std::vector<Complex> c(M);

  // Welford accumulators per mode and part.
  std::vector<double> mean(2 * M, 0.0);
  std::vector<double> m2(2 * M, 0.0);
  Rng rng(mix_seed(cfg.master_seed, 0xA5A5A5A5ull));
  for(int s = 0; s < variance_samples; ++s)
  {
    field.draw_coefficients(tau, rng, xi);
    project(field.synthesize(xi).values, c);
    for(int k = 0; k < M; ++k)
      for(int part = 0; part < 2; ++part)
      {
        const double v = part == 0 ? c[k].real() : c[k].imag();
        const std::size_t idx = 2 * k + part;
        const double delta = v - mean[idx];
        mean[idx] += delta / (s + 1);
        m2[idx] += delta * (v - mean[idx]);
      }
  }
  const double rel_se = std::sqrt(2.0 / (variance_samples - 1));
  bool ok = true;
  for(int k = 1; k <= M; ++k)
  {
    const double a = spec.epsilon * spec.amplitude(k);
    const double expected = tau * a * a;
    for(int part = 0; part < (complex_noise ? 2 : 1); ++part)
    {
      const double var = m2[2 * (k - 1) + part] / (variance_samples - 1);
      ModeVarianceRow row{k, part == 0 ? "re" : "im", expected, var, (var / expected - 1.0) / rel_se};
      ok = ok && std::abs(row.z) <= report.z_limit;
      report.variances.push_back(row);
    }
  }
  if(!complex_noise)
  {
    // Imaginary parts of real noise must vanish identically.
    for(int k = 0; k < M; ++k)
      ok = ok && m2[2 * k + 1] == 0.0;
  }

  // Successive increments from one stream should be uncorrelated.
  const int modes_checked = std::min(M, 10);
  std::vector<double> sa(modes_checked, 0.0), sb(modes_checked, 0.0), saa(modes_checked, 0.0),
      sbb(modes_checked, 0.0), sab(modes_checked, 0.0);
  IncrementStream stream(spec, grid, tau, 1, mix_seed(cfg.master_seed, 0x5A5A5A5Aull));
  std::vector<Complex> ca(M), cb(M);
  for(int p = 0; p < covariance_pairs; ++p)
  {
    project(stream.next().values, ca);
    project(stream.next().values, cb);
    for(int k = 0; k < modes_checked; ++k)
    {
      const double x = ca[k].real();
      const double y = cb[k].real();
      sa[k] += x;
      sb[k] += y;
      saa[k] += x * x;
      sbb[k] += y * y;
      sab[k] += x * y;
    }
  }
  const double np = covariance_pairs;
  for(int k = 0; k < modes_checked; ++k)
  {
    const double cov = (sab[k] - sa[k] * sb[k] / np) / (np - 1);
    const double va = (saa[k] - sa[k] * sa[k] / np) / (np - 1);
    const double vb = (sbb[k] - sb[k] * sb[k] / np) / (np - 1);
    const double se = std::sqrt(va * vb / np);
    CrossCovarianceRow row{k + 1, cov, se, cov / se};
    ok = ok && std::abs(row.z) <= report.z_limit;
    report.cross.push_back(row);
  }
  report.passed = ok;
  return report;
}

}  // namespace snls
