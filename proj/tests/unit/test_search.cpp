#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "jpesp/oracle.hpp"
#include "jpesp/search.hpp"
#include "support.hpp"

using namespace jpesp;
using jpesp::test::make_world;
using jpesp::test::task;
using jpesp::test::tiny_world;

namespace {

std::size_t hamming(const Selection& a, const Selection& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

}  // namespace

TEST_CASE("neighbourhood samples stay in the ball") {
  Rng rng(1);
  const Selection s{1, 0, 0, 0};
  std::set<Selection> seen;
  for (const auto& x : neighborhood_sample(s, 1, 200, rng)) {
    CHECK(x[0] == 1);
    CHECK(hamming(x, s) == 1);
    seen.insert(x);
  }
  CHECK(seen.size() == 3);

  Rng rng2(2);
  const Selection t{1, 1, 0, 1, 0, 0};
  std::set<Selection> all;
  for (const auto& x : neighborhood_sample(t, 5, 4000, rng2)) {
    CHECK(x[0] == 1);
    CHECK(hamming(x, t) >= 1);
    CHECK(hamming(x, t) <= 5);
    all.insert(x);
  }
  CHECK(all.size() == 31);

  Rng a(7), b(7);
  CHECK(neighborhood_sample(t, 3, 50, a) == neighborhood_sample(t, 3, 50, b));
  Rng c(7);
  CHECK(neighborhood_sample({1}, 3, 4, c) == std::vector<Selection>(4, Selection{1}));
}

TEST_CASE("parameter validation") {
  TabuParams p;
  p.tabu_size = 0;
  CHECK_THROWS_AS(validate_params(p), InvalidArgument);
  p = {};
  p.radius = 0;
  CHECK_THROWS_AS(validate_params(p), InvalidArgument);
  p = {};
  p.samples_per_iter = 0;
  CHECK_THROWS_AS(validate_params(p), InvalidArgument);
  CHECK_NOTHROW(validate_params(TabuParams{}));
}

TEST_CASE("scheme names") {
  for (Scheme s : all_schemes()) CHECK(parse_scheme(to_string(s)) == s);
  CHECK_THROWS_AS(parse_scheme("bogus"), InvalidArgument);
}

TEST_CASE("tabu finds the enumerated optimum on small maps") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto s = tiny_world(4, 4, seed);
    TabuParams p;
    p.max_iter = 20;
    p.samples_per_iter = 16;
    p.seed = seed;
    const auto report = tabu_solve(s, p);
    const auto best = oracle::enumerate_best_s(s);
    CHECK(report.objective() == doctest::Approx(best.result.value).epsilon(1e-9));
  }
}

TEST_CASE("strong devices at the start keep the vehicle home") {
  const std::vector<double> x{0, 8, 14, 19};
  std::vector<test::DeviceSpec> devs;
  for (int c = 1; c <= 4; ++c) devs.push_back({1, c, {1e9, 1e3, 1e3, 1e3}});
  const auto s = make_world(x, devs, {task(1, 4)});
  const auto report = tabu_solve(s, TabuParams{});
  CHECK(report.best_s == stay_put(4));
  CHECK(oracle::enumerate_best_s(s).s == stay_put(4));
}

TEST_CASE("zero iterations returns the stay-put plan") {
  const auto s = tiny_world(6, 5, 3);
  TabuParams p;
  p.max_iter = 0;
  const auto report = tabu_solve(s, p, {Scheme::Fixed});
  CHECK(report.best_s == stay_put(6));
  CHECK(report.objective() == report.baselines.at(Scheme::Fixed).objective);
  CHECK(report.trace.size() == 1);
}

TEST_CASE("trace is monotone and matches a re-evaluation") {
  const auto s = tiny_world(8, 6, 11);
  TabuParams p;
  p.max_iter = 30;
  p.seed = 5;
  const auto report = tabu_solve(s, p);
  CHECK(std::is_sorted(report.trace.begin(), report.trace.end()));
  CHECK(report.trace.back() == report.objective());
  CHECK(omega(s, report.best_s).value == report.objective());
  CHECK(report.iterations <= 30);
}

TEST_CASE("stall limit stops early") {
  const auto s = tiny_world(4, 4, 2);
  TabuParams p;
  p.max_iter = 1000;
  p.stall_limit = 3;
  const auto report = tabu_solve(s, p);
  CHECK(report.iterations < 1000);
}

TEST_CASE("results do not depend on thread count") {
  const auto s = tiny_world(9, 6, 8);
  TabuParams p;
  p.max_iter = 15;
  p.seed = 9;
  const auto one = tabu_solve(s, p);
  p.threads = 4;
  const auto four = tabu_solve(s, p);
  CHECK(one.best_s == four.best_s);
  CHECK(one.trace == four.trace);
  CHECK(one.evaluations == four.evaluations);
}

TEST_CASE("baselines") {
  const auto s = tiny_world(8, 6, 4);
  TabuParams p;
  p.max_iter = 40;
  const auto report = tabu_solve(s, p, all_schemes());
  CHECK(report.baselines.size() == 4);
  CHECK(std::isfinite(report.baselines.at(Scheme::Fixed).objective));
  CHECK(report.objective() >= report.baselines.at(Scheme::Fixed).objective - 1e-9);
  CHECK(report.objective() >= report.baselines.at(Scheme::FullPath).objective - 1e-9);
  CHECK(report.baselines.at(Scheme::Fixed).objective >= report.baselines.at(Scheme::ThroughputFixed).objective - 1e-9);

  auto tight = s;
  tight.config.total_time_s = 5.0;
  const auto full = evaluate_baseline(tight, Scheme::FullPath);
  CHECK(std::isinf(full.objective));
  CHECK_FALSE(full.feasible());
  CHECK(std::isinf(evaluate_baseline(tight, Scheme::ThroughputFull).objective));
  CHECK(std::isfinite(evaluate_baseline(tight, Scheme::Fixed).objective));
  CHECK_THROWS_AS(evaluate_baseline(tight, Scheme::Proposed), InvalidArgument);
}

TEST_CASE("single-vertex world") {
  const auto s = tiny_world(1, 1, 0);
  const auto report = tabu_solve(s, TabuParams{});
  CHECK(report.best_s == Selection{1});
  CHECK(std::isfinite(report.objective()));
}
