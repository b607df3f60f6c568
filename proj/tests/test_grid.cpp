#include <doctest.h>

#include <cmath>
#include <numbers>

#include "snls/grid.hpp"
#include "support.hpp"

using namespace snls;

TEST_CASE("grid spacing and node layout")
{
  for(int n : {2, 3, 4, 64, 256, 1000})
  {
    const GridSpec g(n);
    CHECK(std::abs(g.h() * n - 1.0) <= std::numeric_limits<double>::epsilon());
    CHECK(g.interior_count() == static_cast<std::size_t>(n - 1));
    CHECK(g.node(0) == doctest::Approx(g.h()));
    CHECK(g.node(g.interior_count() - 1) == doctest::Approx(1.0 - g.h()));
    CHECK(g.half_node(0) == doctest::Approx(0.5 * g.h()));
  }
  CHECK_THROWS_AS(GridSpec(1), Error);
  CHECK_THROWS_AS(GridSpec(0), Error);
  CHECK_THROWS_AS(GridSpec(-4), Error);
}

TEST_CASE("time grid")
{
  const TimeGrid t = TimeGrid::from_horizon(0.5, 0.0078125);
  CHECK(t.n_steps() == 64);
  CHECK(t.horizon() == 0.5);
  CHECK(t.t(10) == doctest::Approx(0.078125));
  CHECK(TimeGrid::from_horizon(1.0, 0.001).n_steps() == 1000);
  CHECK_THROWS_AS(TimeGrid::from_horizon(1.0, 0.3), Error);
  CHECK_THROWS_AS(TimeGrid::from_horizon(1.0, 0.0), Error);
  CHECK_THROWS_AS(TimeGrid::from_horizon(1.0, -0.1), Error);
  CHECK_THROWS_AS(TimeGrid(0.1, 0), Error);
}

TEST_CASE("sine initial condition samples")
{
  const auto u4 = initial_condition(GridSpec(4), InitialKind::sine);
  REQUIRE(u4.size() == 3);
  CHECK(u4[0].real() == doctest::Approx(std::sin(std::numbers::pi / 4)));
  CHECK(u4[1].real() == doctest::Approx(1.0));
  CHECK(u4[2].real() == doctest::Approx(std::sin(3 * std::numbers::pi / 4)));
  for(const auto& z : u4)
    CHECK(z.imag() == 0.0);

  const auto u2 = initial_condition(GridSpec(2), InitialKind::sine);
  REQUIRE(u2.size() == 1);
  CHECK(u2[0] == Complex(1.0, 0.0));
}

TEST_CASE("custom initial samples")
{
  const GridSpec g(4);
  const std::vector<Complex> s{{1, 2}, {3, 4}, {5, 6}};
  const auto u = initial_condition(g, InitialKind::custom_samples, s);
  CHECK(u[2] == Complex(5, 6));

  const std::vector<Complex> short_samples{{1, 0}, {2, 0}};
  try
  {
    initial_condition(g, InitialKind::custom_samples, short_samples);
    FAIL("expected a length mismatch");
  }
  catch(const Error& e)
  {
    const std::string msg = e.what();
    CHECK(msg.find('2') != std::string::npos);
    CHECK(msg.find('3') != std::string::npos);
  }
}

TEST_CASE("discrete L2 norm")
{
  CHECK(discrete_l2_norm(StateVector(7), GridSpec(8)) == 0.0);
  CHECK(discrete_l2_norm(StateVector(1, Complex(3, 4)), GridSpec(2)) == doctest::Approx(std::sqrt(12.5)));
  const GridSpec g(256);
  CHECK(std::abs(discrete_l2_norm(initial_condition(g, InitialKind::sine), g) - std::sqrt(0.5)) <= 1e-10);
}

TEST_CASE("sampled sine has squared norm 1/2 on every grid")
{
  // h Σ sin²(πjh) over interior nodes is exactly 1/2, so the error sits at rounding level.
  for(int n : {4, 8, 16, 32, 64, 128, 256, 512})
  {
    const GridSpec g(n);
    const double m = discrete_l2_norm(initial_condition(g, InitialKind::sine), g);
    CHECK(std::abs(m * m - 0.5) <= 1e-12);
  }
}

TEST_CASE("state vector arithmetic and finiteness")
{
  StateVector a(3, Complex(1, 1));
  StateVector b(3, Complex(2, -1));
  CHECK((a + b)[1] == Complex(3, 0));
  CHECK((a - b)[2] == Complex(-1, 2));
  CHECK((Complex(0, 1) * a)[0] == Complex(-1, 1));
  CHECK(a.all_finite());
  a[1] = Complex(std::nan(""), 0);
  CHECK_FALSE(a.all_finite());
  StateVector c(2);
  CHECK_THROWS_AS(c += b, Error);
}

TEST_CASE("model parameter validation")
{
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  p.sigma = 2.5;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("sigma must lie in (0,2)"), Error);
  p.sigma = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p.sigma = 1.0;
  p.lambda = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p.allow_linear = true;
  CHECK_NOTHROW(p.validate());
  p.theta = std::nan("");
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("real inner product is the real part of the complex pairing")
{
  const GridSpec g(16);
  Rng rng(3);
  const auto u = test::random_state(g, rng);
  const auto v = test::random_state(g, rng);
  CHECK(real_inner(u, v, g) == doctest::Approx(test::inner(u, v, g).real()).epsilon(1e-14));
  CHECK(real_inner(u, u, g) == doctest::Approx(std::pow(discrete_l2_norm(u, g), 2)));
}
