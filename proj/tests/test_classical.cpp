#include <doctest.h>

#include <cmath>
#include <random>

#include "qso/classical.hpp"
#include "qso/qso_operator.hpp"

using namespace qso;

namespace {

SimplexPoint relabel_forward(const SimplexPoint& p) {  // (x,y,z) -> (y,z,x)
  return SimplexPoint::validated({p[1], p[2], p[0]});
}

}  // namespace

TEST_SUITE_BEGIN("classical");

TEST_CASE("volterra: fixed points and parameter validation") {
  const auto x = SimplexPoint::validated({0.5, 0.3, 0.2});
  const auto same = volterra_apply({0, 0, 0}, x);
  for (int i = 0; i < 3; ++i) CHECK(same[i] == x[i]);

  const auto vertex = SimplexPoint::delta(3, 0);
  const auto still = volterra_apply({0.3, -0.7, 0.9}, vertex);
  CHECK(still[0] == doctest::Approx(1.0));

  const auto center = SimplexPoint::uniform(3);
  const auto fixed = volterra_apply({1, 1, 1}, center);
  for (int i = 0; i < 3; ++i) CHECK(fixed[i] == doctest::Approx(1.0 / 3).epsilon(1e-14));

  CHECK_THROWS_AS(volterra_apply({1.5, 0, 0}, x), std::invalid_argument);
  CHECK_THROWS_AS(volterra_apply({0, 0, 0}, SimplexPoint::uniform(4)), std::invalid_argument);
}

TEST_CASE("volterra conserves mass and maps the simplex into itself") {
  std::mt19937_64 rng(17);
  const auto unit = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53; };
  for (int trial = 0; trial < 300; ++trial) {
    const VolterraParams params{2 * unit() - 1, 2 * unit() - 1, 2 * unit() - 1};
    const auto x = SimplexPoint::dirichlet(3, rng());
    const double raw[3] = {
        x[0] * (1 + params.a * x[1] - params.b * x[2]),
        x[1] * (1 - params.a * x[0] + params.c * x[2]),
        x[2] * (1 + params.b * x[0] - params.c * x[1]),
    };
    CHECK(std::abs(raw[0] + raw[1] + raw[2] - 1.0) < 1e-14);
    for (double v : raw) {
      CHECK(v >= -1e-15);
      CHECK(v <= 1.0 + 1e-15);
    }
    CHECK_NOTHROW(volterra_apply(params, x));
  }
}

TEST_CASE("zakharevitch is the all-ones member") {
  const auto x = SimplexPoint::validated({0.5, 0.5, 0.0});
  const auto y = zakharevitch_apply(x);
  CHECK(y[0] == doctest::Approx(0.75));  // x^2 + 2xy = 1/4 + 1/2
  CHECK(y[1] == doctest::Approx(0.25));
  CHECK(y[2] == doctest::Approx(0.0));

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = SimplexPoint::dirichlet(3, rng());
    const auto via_family = volterra_apply({1, 1, 1}, p);
    const auto direct = zakharevitch_apply(p);
    for (int i = 0; i < 3; ++i) CHECK(direct[i] == via_family[i]);
    // the displayed polynomial form is the same map
    CHECK(direct[0] == doctest::Approx(p[0] * p[0] + 2 * p[0] * p[1]).epsilon(1e-14));
    CHECK(direct[1] == doctest::Approx(p[1] * p[1] + 2 * p[1] * p[2]).epsilon(1e-14));
    CHECK(direct[2] == doctest::Approx(p[2] * p[2] + 2 * p[0] * p[2]).epsilon(1e-14));
  }
}

TEST_CASE("same-sign predicate") {
  CHECK(nonergodic_predicate({1, 1, 1}));
  CHECK_FALSE(nonergodic_predicate({1, -1, 1}));
  CHECK(nonergodic_predicate({-0.5, -0.2, -0.9}));
  CHECK_FALSE(nonergodic_predicate({0, 1, 1}));  // a zero breaks same-sign
  CHECK_FALSE(nonergodic_predicate({0, 0, 0}));

  // the cyclic relabeling (x,y,z)->(y,z,x) conjugates params (a,b,c)->(c,a,b)
  std::mt19937_64 rng(31);
  const auto unit = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53; };
  for (int trial = 0; trial < 100; ++trial) {
    const VolterraParams params{2 * unit() - 1, 2 * unit() - 1, 2 * unit() - 1};
    const VolterraParams rotated{params.c, params.a, params.b};
    CHECK(nonergodic_predicate(params) == nonergodic_predicate(rotated));
    const auto x = SimplexPoint::dirichlet(3, rng());
    const auto lhs = relabel_forward(volterra_apply(params, x));
    const auto rhs = volterra_apply(rotated, relabel_forward(x));
    for (int i = 0; i < 3; ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-14));
  }
}

TEST_CASE("ergodicity diagnostic separates the regular and spiraling cases") {
  // constant map: zero oscillation exactly
  const auto identity = [](const SimplexPoint& x) { return x; };
  CHECK(ergodicity_diagnostic(identity, SimplexPoint::validated({0.5, 0.3, 0.2}), 100,
                              1000) == 0.0);
  CHECK_THROWS_AS(ergodicity_diagnostic(identity, SimplexPoint::uniform(3), 100, 150),
                  std::invalid_argument);

  // a regular group operator settles, so late windows agree
  const Group z4({4});
  const auto op = build_operator(z4, trivial_subgroup(z4), SimplexPoint::uniform(4));
  const auto step = [&](const SimplexPoint& x) { return op.apply(x); };
  for (std::uint64_t seed : {7ull, 12ull, 99ull})
    CHECK(ergodicity_diagnostic(step, SimplexPoint::dirichlet(4, seed), 1'000, 10'000) <
          1e-6);
}

TEST_CASE("log-coordinate orbit keeps the boundary spiral alive") {
  const auto x0 = SimplexPoint::validated({0.5, 0.3, 0.2});

  // the log orbit matches the plain map while coordinates are representable
  ZakharevitchLogOrbit orbit(x0);
  SimplexPoint plain = x0;
  for (int t = 0; t < 40; ++t) {
    const auto w = orbit.weights();
    for (int i = 0; i < 3; ++i) CHECK(std::abs(w[i] - plain[i]) < 1e-10);
    orbit.advance();
    plain = zakharevitch_apply(plain);
  }

  CHECK_THROWS_AS(ZakharevitchLogOrbit(SimplexPoint::validated({0.5, 0.5, 0.0})),
                  std::invalid_argument);

  // windowed averages keep swinging between vertices at the long horizon
  const double swing = zakharevitch_log_diagnostic(x0, 100'000, 1'000'000);
  CHECK(swing > 0.01);

  // while the plain double orbit is absorbed by a vertex and flatlines;
  // this is the round-off artifact the log orbit exists to avoid
  const auto zak = [](const SimplexPoint& x) { return zakharevitch_apply(x); };
  CHECK(ergodicity_diagnostic(zak, x0, 100'000, 1'000'000) < 1e-12);
}

TEST_SUITE_END();
