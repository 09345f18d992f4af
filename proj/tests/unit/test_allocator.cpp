#include <doctest.h>

#include <cmath>
#include <random>

#include "jpesp/allocator.hpp"
#include "jpesp/oracle.hpp"
#include "support.hpp"

using namespace jpesp;
using jpesp::test::make_world;
using jpesp::test::task;
using jpesp::test::tiny_world;

namespace {

PlanningConfig unit_config(double T, double E) {
  PlanningConfig c;
  c.total_time_s = T;
  c.energy_budget_j = E;
  c.bandwidth_hz = c.bits_per_sample;
  return c;
}

double bits(const Allocation& a, std::size_t u) {
  return perspective_capacity(a.time_s[u], a.energy_j[u], a.effective_gain[u]);
}

}  // namespace

TEST_CASE("effective gain") {
  const std::vector<double> F{5, 9, 2};
  auto g = effective_gain({1, 1, 0}, F);
  CHECK(g.gain == 9);
  CHECK(g.vertex == 1);
  g = effective_gain({1, 0, 0}, F);
  CHECK(g.gain == 5);
  CHECK(g.vertex == 0);
  g = effective_gain({1, 1, 1}, std::vector<double>{7, 7, 1});
  CHECK(g.gain == 7);
  CHECK(g.vertex == 0);
}

TEST_CASE("perspective capacity") {
  CHECK(perspective_capacity(0.0, 1.0, 5.0) == 0.0);
  CHECK(perspective_capacity(10.0, 1.0, 1.0) == doctest::Approx(10 * std::log2(1.1)));
}

TEST_CASE("one device spends both budgets") {
  const auto s = make_world({0}, {{1, 1, {1.0}}}, {task(1, 1)}, unit_config(10, 1));
  const auto route = plan_route({1}, s.distances, s.config);
  const auto a = solve_inner(s, route);
  CHECK(a.time_s[0] == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(a.energy_j[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.alpha[0] == doctest::Approx(1.37504).epsilon(1e-5));
  CHECK(a.alpha[0] == doctest::Approx(10 * std::log2(1.1)).epsilon(1e-9));
}

TEST_CASE("identical devices in one class pool their budgets") {
  const auto pair = make_world({0}, {{1, 1, {3.0}}, {1, 1, {3.0}}}, {task(1, 1)}, unit_config(10, 1));
  const auto single = make_world({0}, {{1, 1, {3.0}}}, {task(1, 1)}, unit_config(10, 1));
  const auto a = solve_inner(pair, plan_route({1}, pair.distances, pair.config));
  const auto b = solve_inner(single, plan_route({1}, single.distances, single.config));
  CHECK(a.alpha[0] == doctest::Approx(b.alpha[0]).epsilon(1e-9));
  CHECK(a.comm_time_s == doctest::Approx(10.0));
}

TEST_CASE("no residual budget is infeasible") {
  const auto s = make_world({0, 5}, {{1, 1, {1.0, 1.0}}}, {task(1, 1)}, unit_config(10, 1000));
  const auto route = plan_route({1, 1}, s.distances, s.config);
  CHECK(route.motion_time_s == doctest::Approx(10.0));
  CHECK_THROWS_AS(solve_inner(s, route), InfeasibleError);
  CHECK(std::isinf(omega(s, {1, 1}).value));
  CHECK(omega(s, {1, 1}).value < 0);
  CHECK_FALSE(omega(s, {1, 1}).reason.empty());
  CHECK(std::isfinite(omega(s, {1, 0}).value));
}

TEST_CASE("expand_allocation places the schedule at the serving vertex") {
  const auto s = make_world({0, 1, 2}, {{1, 1, {1, 5, 2}}, {1, 2, {4, 1, 1}}}, {task(1, 2)}, unit_config(100, 10));
  Allocation a;
  a.time_s = {10.0, 0.0};
  a.energy_j = {1.0, 0.0};
  auto full = expand_allocation(a, s, {1, 1, 0});
  CHECK(full.time_s(0, 1) == 10.0);
  CHECK(full.power_w(0, 1) == doctest::Approx(0.1));
  CHECK(full.time_s(0, 0) == 0.0);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(full.time_s(1, j) == 0.0);
    CHECK(full.power_w(1, j) == 0.0);
  }
  a.time_s = {10.0, 4.0};
  a.energy_j = {1.0, 2.0};
  full = expand_allocation(a, s, {1, 1, 0});
  CHECK(full.time_s(1, 0) == 4.0);
  CHECK(full.time_s(0, 0) == 0.0);
  CHECK(full.time_s(1, 1) == 0.0);
}

TEST_CASE("throughput baseline") {
  SUBCASE("one device matches the F-measure schedule") {
    const auto s = make_world({0}, {{1, 1, {2.0}}}, {task(1, 1)}, unit_config(10, 1));
    const auto route = plan_route({1}, s.distances, s.config);
    const auto a = solve_inner(s, route);
    const auto b = solve_throughput_baseline(s, route);
    CHECK(a.time_s[0] == doctest::Approx(b.time_s[0]));
    CHECK(a.energy_j[0] == doctest::Approx(b.energy_j[0]));
  }
  SUBCASE("equal gains give equal bits") {
    const auto s = make_world({0}, {{1, 1, {2.0}}, {1, 2, {2.0}}}, {task(1, 2)}, unit_config(10, 1));
    const auto b = solve_throughput_baseline(s, plan_route({1}, s.distances, s.config));
    CHECK(bits(b, 0) == doctest::Approx(bits(b, 1)).epsilon(1e-9));
  }
  SUBCASE("the weaker device gets more time") {
    const auto s = make_world({0}, {{1, 1, {20.0}}, {1, 2, {2.0}}}, {task(1, 2)}, unit_config(10, 1));
    const auto route = plan_route({1}, s.distances, s.config);
    const auto b = solve_throughput_baseline(s, route);
    CHECK(b.time_s[1] > b.time_s[0]);
    CHECK(bits(b, 0) == doctest::Approx(bits(b, 1)).epsilon(1e-9));
    const auto grid = oracle::grid_inner_oracle(s, route.s, route.edges, 60);
    CHECK(b.objective >= grid.value - 1e-12);
    CHECK(b.objective <= solve_inner(s, route).objective + 1e-9);
  }
}

TEST_CASE("historical samples lower the needed upload") {
  auto base = make_world({0}, {{1, 1, {50.0}}, {1, 2, {50.0}}}, {task(1, 2)}, unit_config(10, 1));
  const auto route = plan_route({1}, base.distances, base.config);
  const auto a = solve_inner(base, route);
  auto hist = base;
  hist.devices[0].historical = 5;
  const auto b = solve_inner(hist, route);
  CHECK(b.alpha[0] > a.alpha[0]);
  CHECK(b.time_s[0] < b.time_s[1]);
  CHECK(b.class_samples[0] == doctest::Approx(b.class_samples[1]).epsilon(1e-8));
  CHECK(b.class_samples[0] == doctest::Approx(5 + bits(b, 0)));
}

TEST_CASE("allocation invariants on random worlds") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto s = tiny_world(5, 3 + seed % 4, seed);
    Rng rng(seed);
    Selection sel(5, 0);
    sel[0] = 1;
    for (std::size_t j = 1; j < 5; ++j) sel[j] = std::uniform_int_distribution<int>(0, 1)(rng);
    const auto r = omega(s, sel);
    REQUIRE(r.feasible());
    const auto& a = *r.allocation;
    CHECK(a.comm_time_s <= a.time_budget_s * (1 + 1e-12));
    CHECK(a.comm_energy_j <= a.energy_budget_j * (1 + 1e-12));
    const bool time_tight = a.comm_time_s >= a.time_budget_s * (1 - 1e-6);
    const bool energy_tight = a.comm_energy_j >= a.energy_budget_j * (1 - 1e-6);
    CHECK((time_tight || energy_tight));
    for (std::size_t u = 0; u < a.time_s.size(); ++u) {
      CHECK(a.time_s[u] >= 0.0);
      CHECK(a.energy_j[u] >= 0.0);
      if (a.time_s[u] > 1e-9) CHECK(a.power_w[u] > 1e-9);
    }
    CHECK(r.value == doctest::Approx(eval_fmeasure(s.tasks[0].model, a.alpha[0])));

    auto richer = s;
    richer.config.total_time_s *= 1.2;
    CHECK(omega(richer, sel).value >= r.value - 1e-12);
    richer = s;
    richer.config.energy_budget_j *= 1.2;
    CHECK(omega(richer, sel).value >= r.value - 1e-12);
  }
}

TEST_CASE("power cap is respected") {
  auto s = tiny_world(3, 3, 4);
  s.config.pmax_enabled = true;
  s.config.pmax_w = 0.5;
  const auto r = omega(s, {1, 1, 1});
  REQUIRE(r.feasible());
  for (double p : r.allocation->power_w) CHECK(p <= 0.5 * (1 + 1e-9));
  s.config.pmax_enabled = false;
  CHECK(omega(s, {1, 1, 1}).value >= r.value - 1e-12);
}

TEST_CASE("two-vertex world agrees with the grid") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto s = tiny_world(2, 1 + seed % 2, seed);
    for (const Selection& sel : {Selection{1, 0}, Selection{1, 1}}) {
      const auto r = omega(s, sel, TspMode::Exact);
      const auto grid = oracle::grid_inner_oracle(s, sel, r.route.edges, 120);
      CHECK(r.value >= grid.value - 1e-12);
      CHECK(r.value <= grid.value + 1e-4);
    }
  }
}

TEST_CASE("perspective capacity is concave") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int i = 0; i < 10000; ++i) {
    const double e1 = u(rng), d1 = u(rng), e2 = u(rng), d2 = u(rng), g = u(rng) * 1000;
    const double mid = perspective_capacity((e1 + e2) / 2, (d1 + d2) / 2, g);
    const double avg = (perspective_capacity(e1, d1, g) + perspective_capacity(e2, d2, g)) / 2;
    CHECK(mid >= avg - 1e-12 * std::max(1.0, std::abs(avg)));
  }
}
