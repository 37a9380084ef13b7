#include "doctest.h"

#include <cmath>

#include "esslab/comparison.hpp"
#include "esslab/errors.hpp"
#include "gen.hpp"

using namespace esslab;

TEST_CASE("zero envelope gives u = 1/r and log g = log r") {
  const auto sol = solve_comparison_ode(parse_delta_spec("zero"), 1e3);
  for (double r : {0.01, 1.0, 10.0, 500.0}) {
    CHECK(sol.u(r) == doctest::Approx(1.0 / r).epsilon(1e-9));
    CHECK(sol.log_g(r) == doctest::Approx(std::log(r)).epsilon(1e-9));
  }
}

TEST_CASE("constant envelope reproduces coth") {
  const auto sol = solve_comparison_ode(parse_delta_spec("const:1"), 10.0);
  for (double r = 1.0; r <= 10.0; r += 0.25) CHECK(std::abs(sol.u(r) - 1.0 / std::tanh(r)) < 1e-8);
  CHECK(sol.stats.max_residual < 1e-8);
}

TEST_CASE("general constant envelope: u = sqrt(c) coth(sqrt(c) r)") {
  testing::Gen gen(21);
  for (int i = 0; i < 8; ++i) {
    const std::string c = std::to_string(gen.uniform(0.1, 4.0));
    const auto sol = solve_comparison_ode(parse_delta_spec("const:" + c), 8.0);
    const double k = std::sqrt(std::stod(c));
    for (double r = 0.5; r <= 8.0; r += 0.5) CHECK(sol.u(r) == doctest::Approx(k / std::tanh(k * r)).epsilon(1e-8));
  }
}

TEST_CASE("decaying envelope: u decays and two resolutions agree") {
  const DeltaProfile d = parse_delta_spec("inv-sq:1");
  ComparisonOptions fine;
  fine.points_per_decade = 400;
  const auto a = solve_comparison_ode(d, 1e3);
  const auto b = solve_comparison_ode(d, 1e3, fine);
  CHECK(a.u(1e3) <= 0.01);
  CHECK(std::abs(a.u(1e3) - b.u(1e3)) <= 1e-9);
  CHECK(verify_decay(a, 0.01).status == DecayStatus::pass);
}

TEST_CASE("non-decaying envelope fails the decay check") {
  const auto sol = solve_comparison_ode(parse_delta_spec("const:1"), 100.0);
  CHECK(verify_decay(sol, 0.01).status == DecayStatus::fail);
}

TEST_CASE("property: u >= 1/r and the Riccati equation holds between nodes") {
  testing::Gen gen(22);
  const char* kinds[] = {"inv", "inv-sq", "exp"};
  for (int i = 0; i < 9; ++i) {
    const std::string spec = std::string(kinds[i % 3]) + ":" + std::to_string(gen.uniform(0.1, 3.0));
    const DeltaProfile d = parse_delta_spec(spec);
    const auto sol = solve_comparison_ode(d, 200.0);
    for (double r = 0.5; r < 199.0; r *= 1.7) {
      // g'' = delta g >= 0 with g(0)=0, g'(0)=1 gives g >= r and g'/g >= 1/r.
      CHECK(sol.u(r) >= 1.0 / r - 1e-12);
      const double h = 1e-4 * r;
      const double du = (sol.u(r + h) - sol.u(r - h)) / (2.0 * h);
      CHECK(du == doctest::Approx(d(r) - sol.u(r) * sol.u(r)).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("invalid envelopes") {
  CHECK_THROWS_AS(parse_delta_spec("const:-1"), InvalidInput);
  CHECK_THROWS_AS(parse_delta_spec("wiggle:1"), InvalidInput);
  const DeltaProfile neg = DeltaProfile::closed_form("neg", [](double r) { return r > 5.0 ? -1.0 : 1.0; });
  CHECK_THROWS_AS(solve_comparison_ode(neg, 10.0), InvalidInput);
}

TEST_CASE("tabulated envelopes interpolate linearly") {
  const DeltaProfile d = DeltaProfile::tabulated("t", {0.0, 1.0, 3.0}, {2.0, 1.0, 0.0});
  CHECK(d(0.5) == doctest::Approx(1.5));
  CHECK(d(2.0) == doctest::Approx(0.5));
  CHECK(d(10.0) == doctest::Approx(0.0));
  const auto v = check_delta(d, 3.0, 1e-6);
  CHECK(v.nonincreasing);
  CHECK_FALSE(v.positive);
}

TEST_CASE("envelope flags") {
  const Envelope e = envelope_from_model(make_euclidean(3, 1e3));
  CHECK(e.asymptotically_nonnegative);
  CHECK(e.delta(5.0) == doctest::Approx(kDeltaFloor));
  const Envelope h = envelope_from_model(make_hyperbolic(3, 700.0));
  CHECK_FALSE(h.asymptotically_nonnegative);
  CHECK(h.delta(10.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_FALSE(envelope_from_model(make_cusp(200.0)).asymptotically_nonnegative);
}

TEST_CASE("normalized envelope dominates g'/g and is nonincreasing") {
  const WarpedModel m = make_glued_cone(3, 20.0, 0.5, 1e3);
  const Envelope env = envelope_from_model(m);
  const auto sol = solve_comparison_ode(env.delta, 1e3);
  const DeltaProfile d = normalize_envelope(env.delta, sol);
  double prev = d(1e-3);
  for (double r = 1e-3; r < 1e3; r *= 1.3) {
    CHECK(d(r) >= sol.u(r) * (1.0 - 1e-12));
    CHECK(d(r) <= prev);
    prev = d(r);
  }
}
