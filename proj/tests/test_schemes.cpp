#include <doctest.h>

#include <cmath>
#include <numbers>

#include "snls/observables.hpp"
#include "snls/schemes.hpp"
#include "support.hpp"

using namespace snls;

namespace {

ModelParams linear_free()
{
  ModelParams p;
  p.theta = 0.0;
  p.lambda = 0.0;
  p.allow_linear = true;
  return p;
}

WienerIncrement zero_increment(const GridSpec& g)
{
  return {StateVector(g.interior_count()), 0};
}

WienerIncrement noisy_increment(const GridSpec& g, double tau, std::uint64_t seed, double eps = std::sqrt(2.0))
{
  Rng rng(seed);
  return sample_increment(NoiseSpec{20, 4.6, eps, NoiseKind::real}, g, tau, rng);
}

SchemeConfig with(SchemeKind kind)
{
  SchemeConfig c;
  c.scheme = kind;
  return c;
}

}  // namespace

TEST_CASE("cutoff function")
{
  for(CutoffKind kind : {CutoffKind::smooth_bump, CutoffKind::hard_clip})
  {
    CHECK(cutoff(0.0, kind) == 1.0);
    CHECK(cutoff(1.0, kind) == 1.0);
    CHECK(cutoff(2.0, kind) == 0.0);
    CHECK(cutoff(7.0, kind) == 0.0);
    double prev = 1.0;
    for(double r = 1.0; r <= 2.0; r += 0.05)
    {
      const double m = cutoff(r, kind);
      CHECK(m <= prev + 1e-15);
      CHECK(m >= 0.0);
      prev = m;
    }
  }
  CHECK(cutoff(1.5, CutoffKind::smooth_bump) == doctest::Approx(0.5));
  CHECK(cutoff(1.25, CutoffKind::hard_clip) == doctest::Approx(0.75));
}

TEST_CASE("half-grid values and H1 norm")
{
  const StateVector u(std::vector<Complex>{{2, 0}, {4, 0}});
  const auto half = half_grid_values(u);
  REQUIRE(half.size() == 3);
  CHECK(half[0] == Complex(1, 0));
  CHECK(half[1] == Complex(3, 0));
  CHECK(half[2] == Complex(2, 0));
  const GridSpec g(3);
  // h(4 + 16) + h((2² + 2² + 4²)/h²) with h = 1/3
  CHECK(discrete_h1_norm(u, g) == doctest::Approx(std::sqrt(20.0 / 3.0 + 24.0 * 3.0)));
}

TEST_CASE("linear mid-point step is the Cayley transform")
{
  const GridSpec g(64);
  const double tau = 0.01;
  Rng rng(21);
  const auto u = test::random_smooth_state(g, rng);
  const auto next = midpoint_step(u, zero_increment(g), linear_free(), g, tau, SchemeConfig{});
  CHECK(test::max_abs_diff(next, cayley_apply(u, g, tau)) <= 1e-12);
  CHECK(std::abs(charge(next, g) - charge(u, g)) <= 1e-13);
}

TEST_CASE("deterministic charge conservation for every scheme and power")
{
  const GridSpec g(64);
  const double tau = 0.005;
  Rng rng(3);
  for(double sigma : {0.5, 1.0, 1.5})
    for(SchemeKind kind : {SchemeKind::midpoint, SchemeKind::multisymplectic})
    {
      ModelParams p;
      p.sigma = sigma;
      p.theta = -1.0;
      const Stepper s(g, p, tau, with(kind));
      auto u = test::random_smooth_state(g, rng, 4);
      const ChargeForm form = charge_form_for(kind);
      const double m0 = charge(u, g, form);
      for(int n = 0; n < 20; ++n)
        u = s.step(u, zero_increment(g));
      CHECK(std::abs(charge(u, g, form) - m0) <= 10.0 * SchemeConfig{}.fp_tol);
    }
}

TEST_CASE("stochastic charge recursion for every scheme")
{
  const GridSpec g(64);
  const double tau = 0.01;
  Rng rng(4);
  for(SchemeKind kind : {SchemeKind::midpoint, SchemeKind::truncated_midpoint, SchemeKind::multisymplectic})
  {
    const Stepper s(g, ModelParams{}, tau, with(kind));
    auto u = initial_condition(g, InitialKind::sine);
    for(int n = 0; n < 30; ++n)
    {
      const auto dW = noisy_increment(g, tau, 100 + n);
      const auto next = s.step(u, dW);
      CHECK(charge_recursion_residual(u, next, dW, g, kind) <= 10.0 * SchemeConfig{}.fp_tol);
      u = next;
    }
  }
}

TEST_CASE("accepted steps satisfy the scheme residual bound")
{
  const GridSpec g(64);
  const double tau = 0.01;
  for(SchemeKind kind : {SchemeKind::midpoint, SchemeKind::truncated_midpoint, SchemeKind::multisymplectic})
  {
    const Stepper s(g, ModelParams{}, tau, with(kind));
    const auto u = initial_condition(g, InitialKind::sine);
    const auto dW = noisy_increment(g, tau, 9);
    StepStats stats;
    const auto next = s.step(u, dW, &stats);
    CHECK(stats.iterations >= 1);
    CHECK(stats.iterations <= SchemeConfig{}.fp_max_iter);
    CHECK(stats.residual <= SchemeConfig{}.fp_tol * (1.0 + discrete_l2_norm(u, g)));
    CHECK(s.residual(u, next, dW) == doctest::Approx(stats.residual).epsilon(1e-6));
    CHECK(next.all_finite());
  }
}

TEST_CASE("fixed-point increments decrease after the second sweep")
{
  const GridSpec g(64);
  for(SchemeKind kind : {SchemeKind::midpoint, SchemeKind::multisymplectic})
  {
    const Stepper s(g, ModelParams{}, 0.01, with(kind));
    StepStats stats;
    s.step(initial_condition(g, InitialKind::sine), noisy_increment(g, 0.01, 77), &stats);
    REQUIRE(stats.increments.size() >= 3);
    for(std::size_t m = 2; m < stats.increments.size(); ++m)
      CHECK(stats.increments[m] < stats.increments[m - 1]);
  }
}

TEST_CASE("non-convergence is reported")
{
  const GridSpec g(64);
  SchemeConfig cfg;
  cfg.fp_max_iter = 2;
  const Stepper s(g, ModelParams{}, 0.01, cfg);
  StateVector big = initial_condition(g, InitialKind::sine);
  big *= 5.0;
  try
  {
    s.step(big, zero_increment(g));
    FAIL("expected NonConvergence");
  }
  catch(const NonConvergence& e)
  {
    CHECK(e.iterations() == 2);
    CHECK(e.last_increment() > 0.0);
  }
}

TEST_CASE("scheme configuration validation")
{
  SchemeConfig c;
  CHECK_NOTHROW(c.validate());
  c.fp_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = SchemeConfig{};
  c.fp_max_iter = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = SchemeConfig{};
  c.scheme = SchemeKind::truncated_midpoint;
  c.truncation_radius = -1.0;
  CHECK_THROWS_AS(c.validate(), Error);

  ModelParams p;
  p.sigma = 1.5;
  CHECK_THROWS_AS(Stepper(GridSpec(8), p, 0.01, with(SchemeKind::truncated_midpoint)), Error);
  CHECK_THROWS_AS(Stepper(GridSpec(8), ModelParams{}, 0.0, SchemeConfig{}), Error);

  CHECK(scheme_from_string("multi-symplectic") == SchemeKind::multisymplectic);
  CHECK(to_string(SchemeKind::truncated_midpoint) == "truncated-midpoint");
  CHECK(cutoff_from_string(to_string(CutoffKind::hard_clip)) == CutoffKind::hard_clip);
  CHECK_THROWS_AS(scheme_from_string("euler"), Error);
  CHECK_THROWS_AS(cutoff_from_string("sharp"), Error);
}

TEST_CASE("truncated scheme inside the ball equals the mid-point scheme")
{
  const GridSpec g(64);
  const double tau = 0.01;
  SchemeConfig tc = with(SchemeKind::truncated_midpoint);
  tc.truncation_radius = 10.0;
  Rng rng(31);
  for(int r = 0; r < 20; ++r)
  {
    const auto u = test::random_smooth_state(g, rng, 3);
    const auto dW = noisy_increment(g, tau, 500 + r);
    const auto a = midpoint_step(u, dW, ModelParams{}, g, tau, SchemeConfig{});
    const auto b = truncated_midpoint_step(u, dW, ModelParams{}, g, tau, tc);
    REQUIRE(discrete_h1_norm(0.5 * (u + b), g) <= tc.truncation_radius);
    CHECK(discrete_l2_norm(a - b, g) <= 10.0 * tc.fp_tol);
    // The mild-form solution also solves the implicit mid-point equation.
    const Stepper direct(g, ModelParams{}, tau, SchemeConfig{});
    CHECK(direct.residual(u, b, dW) <= 10.0 * tc.fp_tol);
  }
}

TEST_CASE("truncated scheme beyond twice the radius drops the nonlinearity")
{
  const GridSpec g(64);
  const double tau = 0.01;
  for(CutoffKind kind : {CutoffKind::smooth_bump, CutoffKind::hard_clip})
  {
    SchemeConfig tc = with(SchemeKind::truncated_midpoint);
    tc.truncation_radius = 0.5;
    tc.cutoff = kind;
    ModelParams lin;
    lin.lambda = 0.0;
    lin.allow_linear = true;
    const auto u = initial_condition(g, InitialKind::sine);
    const auto dW = noisy_increment(g, tau, 8);
    const auto a = midpoint_step(u, dW, lin, g, tau, SchemeConfig{});
    const auto b = truncated_midpoint_step(u, dW, ModelParams{}, g, tau, tc);
    REQUIRE(discrete_h1_norm(0.5 * (u + b), g) >= 2.0 * tc.truncation_radius);
    CHECK(discrete_l2_norm(a - b, g) <= 10.0 * tc.fp_tol);
  }
}

TEST_CASE("partially active cutoff keeps the one-step identities")
{
  const GridSpec g(64);
  const double tau = 0.01;
  SchemeConfig tc = with(SchemeKind::truncated_midpoint);
  tc.truncation_radius = 1.6;  // sine data has H1 norm about 2.3: μ strictly inside (0,1)
  const Stepper s(g, ModelParams{}, tau, tc);
  const auto u = initial_condition(g, InitialKind::sine);
  const auto dW = noisy_increment(g, tau, 5);
  const auto next = s.step(u, dW);
  const double mu = s.cutoff_factor(0.5 * (u + next));
  CHECK(mu > 0.0);
  CHECK(mu < 1.0);
  CHECK(charge_recursion_residual(u, next, dW, g, SchemeKind::truncated_midpoint) <= 10.0 * tc.fp_tol);
  CHECK(energy_recursion_residual(u, next, dW, g, ModelParams{}, tau, SchemeKind::truncated_midpoint, mu) <=
        100.0 * tc.fp_tol);
}

TEST_CASE("multi-symplectic scheme matches the semi-discrete solution at O(h^2)")
{
  // λ = θ = ε = 0 on sin(πx): the scheme evolves the eigenline with the effective
  // eigenvalue 2λ_1/b_1, b_1 = 1 + cos(πh). Compare with the mid-point scheme applied to
  // the continuous Laplacian's eigenvalue -π², a scalar oracle.
  const double tau = 0.01;
  const int steps = 50;
  const Complex i(0.0, 1.0);
  const double lam = -std::numbers::pi * std::numbers::pi;
  const Complex oracle = std::pow((1.0 + i * tau * lam / 2.0) / (1.0 - i * tau * lam / 2.0), steps);
  std::vector<double> errors;
  for(int n : {16, 32, 64, 128})
  {
    const GridSpec g(n);
    const Stepper s(g, linear_free(), tau, with(SchemeKind::multisymplectic));
    auto u = initial_condition(g, InitialKind::sine);
    const auto u0 = u;
    for(int k = 0; k < steps; ++k)
      u = s.step(u, zero_increment(g));
    errors.push_back(discrete_l2_norm(u - oracle * u0, g));
  }
  for(std::size_t k = 1; k < errors.size(); ++k)
    CHECK(errors[k - 1] / errors[k] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("tangent map")
{
  const GridSpec g(64);
  const double tau = 0.01;
  const SchemeConfig cfg;
  const auto u = initial_condition(g, InitialKind::sine);
  const auto dW = noisy_increment(g, tau, 13);

  SUBCASE("zero perturbation stays zero")
  {
    const auto next = midpoint_step(u, dW, ModelParams{}, g, tau, cfg);
    const auto xi = tangent_step(u, next, StateVector(g.interior_count()), ModelParams{}, g, tau, cfg);
    CHECK(test::max_abs_diff(xi, StateVector(g.interior_count())) == 0.0);
  }
  SUBCASE("linear case is the Cayley transform")
  {
    const auto next = midpoint_step(u, dW, linear_free(), g, tau, cfg);
    Rng rng(1);
    const auto xi = test::random_state(g, rng);
    const auto out = tangent_step(u, next, xi, linear_free(), g, tau, cfg);
    CHECK(test::max_abs_diff(out, cayley_apply(xi, g, tau)) <= 1e-12);
    CHECK(std::abs(discrete_l2_norm(out, g) - discrete_l2_norm(xi, g)) <= 1e-12);
  }
  SUBCASE("finite-difference consistency")
  {
    const ModelParams p;
    const auto next = midpoint_step(u, dW, p, g, tau, cfg);
    Rng rng(2);
    const auto xi = test::random_smooth_state(g, rng, 4);
    const auto lin = tangent_step(u, next, xi, p, g, tau, cfg);
    auto fd_error = [&](double delta) {
      StateVector shifted = u;
      StateVector dxi = xi;
      dxi *= delta;
      shifted += dxi;
      StateVector diff = midpoint_step(shifted, dW, p, g, tau, cfg) - next;
      diff *= 1.0 / delta;
      return discrete_l2_norm(diff - lin, g);
    };
    const double e1 = fd_error(1e-5);
    const double e2 = fd_error(5e-6);
    CHECK(e1 <= 1e-3 * discrete_l2_norm(xi, g));
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.1));
  }
  SUBCASE("tangent residual and sigma restriction")
  {
    const Stepper s(g, ModelParams{}, tau, cfg);
    const auto next = s.midpoint(u, dW);
    const auto xi = test::sine_mode(g, 2);
    const auto out = s.tangent(u, next, xi);
    CHECK(s.tangent_residual(u, next, xi, out) <= 10.0 * cfg.fp_tol);
    ModelParams p;
    p.sigma = 0.5;
    const Stepper s2(g, p, tau, cfg);
    CHECK_THROWS_AS(s2.tangent(u, next, xi), Error);
  }
}

TEST_CASE("symplectic form is preserved along a stochastic path")
{
  const GridSpec g(64);
  const double tau = 0.01;
  const Stepper s(g, ModelParams{}, tau, SchemeConfig{});
  IncrementStream noise(NoiseSpec{20, 4.6, std::sqrt(2.0), NoiseKind::real}, g, tau, 1, 5);
  auto u = initial_condition(g, InitialKind::sine);
  auto xi = test::sine_mode(g, 1);
  auto eta = test::sine_mode(g, 1, Complex(0, 1)) + test::sine_mode(g, 2, 0.5);
  const double w0 = symplectic_form(xi, eta, g);
  for(int n = 0; n < 100; ++n)
  {
    const auto dW = noise.next();
    const auto next = s.midpoint(u, dW);
    xi = s.tangent(u, next, xi);
    eta = s.tangent(u, next, eta);
    u = next;
  }
  CHECK(std::abs(symplectic_form(xi, eta, g) - w0) / std::abs(w0) <= 1e-10);
}

TEST_CASE("steps are pure functions of their inputs")
{
  const GridSpec g(32);
  const double tau = 0.01;
  const auto u = initial_condition(g, InitialKind::sine);
  const auto dW = noisy_increment(g, tau, 1);
  for(SchemeKind kind : {SchemeKind::midpoint, SchemeKind::truncated_midpoint, SchemeKind::multisymplectic})
  {
    const Stepper s(g, ModelParams{}, tau, with(kind));
    CHECK(s.step(u, dW) == s.step(u, dW));
  }
  CHECK_THROWS_AS(midpoint_step(StateVector(3), dW, ModelParams{}, g, tau, SchemeConfig{}), Error);
}
