#include "jpesp/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace jpesp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

SchemeResult from_omega(OmegaResult r) {
  SchemeResult out;
  out.objective = r.value;
  out.route = std::move(r.route);
  out.allocation = std::move(r.allocation);
  out.reason = std::move(r.reason);
  return out;
}

// Evaluates every selection in `todo`, splitting the work across threads.
std::vector<OmegaResult> evaluate_all(const Scenario& scenario, const std::vector<Selection>& todo, unsigned threads,
                                      TspMode mode) {
  std::vector<OmegaResult> out(todo.size());
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), todo.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < todo.size(); ++i) out[i] = omega(scenario, todo[i], mode);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < todo.size(); i += workers) out[i] = omega(scenario, todo[i], mode);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

struct TabuEntry {
  Selection s;
  double value;
};

}  // namespace

void validate_params(const TabuParams& p) {
  if (p.tabu_size == 0) throw InvalidArgument("tabu list size must be at least 1");
  if (p.radius == 0) throw InvalidArgument("neighbourhood radius must be at least 1");
  if (p.samples_per_iter == 0) throw InvalidArgument("samples per iteration must be at least 1");
}

std::vector<Selection> neighborhood_sample(const Selection& s_c, std::size_t radius, std::size_t n, Rng& rng) {
  if (s_c.empty() || !s_c[0]) throw InvalidArgument("neighborhood_sample: start vertex must be selected");
  const std::size_t free = s_c.size() - 1;
  std::vector<Selection> out;
  out.reserve(n);
  if (free == 0 || radius == 0) {
    out.assign(n, s_c);
    return out;
  }
  const std::size_t z = std::min(radius, free);
  std::vector<std::size_t> positions(free);
  for (std::size_t i = 0; i < n; ++i) {
    std::iota(positions.begin(), positions.end(), std::size_t{1});
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, z)(rng);
    Selection x = s_c;
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t pick = std::uniform_int_distribution<std::size_t>(j, free - 1)(rng);
      std::swap(positions[j], positions[pick]);
      x[positions[j]] ^= 1;
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Proposed: return "proposed";
    case Scheme::Fixed: return "fixed";
    case Scheme::FullPath: return "full_path";
    case Scheme::ThroughputFixed: return "throughput_fixed";
    case Scheme::ThroughputFull: return "throughput_full";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  for (Scheme s : all_schemes()) {
    if (to_string(s) == name) return s;
  }
  throw InvalidArgument("unknown scheme '" + name + "'");
}

std::vector<Scheme> all_schemes() {
  return {Scheme::Proposed, Scheme::Fixed, Scheme::FullPath, Scheme::ThroughputFixed, Scheme::ThroughputFull};
}

SchemeResult evaluate_baseline(const Scenario& scenario, Scheme scheme, TspMode mode) {
  const std::size_t J = scenario.vertex_count();
  switch (scheme) {
    case Scheme::Fixed: return from_omega(omega(scenario, stay_put(J), mode));
    case Scheme::FullPath: return from_omega(omega(scenario, all_vertices(J), mode));
    case Scheme::ThroughputFixed:
    case Scheme::ThroughputFull: {
      const Selection s = scheme == Scheme::ThroughputFixed ? stay_put(J) : all_vertices(J);
      SchemeResult out;
      out.objective = kNegInf;
      out.route.s = s;
      try {
        out.route = plan_route(s, scenario.distances, scenario.config, mode);
        out.allocation = solve_throughput_baseline(scenario, out.route);
        out.objective = out.allocation->objective;
      } catch (const InfeasibleError& e) {
        out.reason = e.what();
      }
      return out;
    }
    case Scheme::Proposed: break;
  }
  throw InvalidArgument("evaluate_baseline: the proposed scheme needs tabu_solve");
}

SolveReport tabu_solve(const Scenario& scenario, const TabuParams& params, const std::vector<Scheme>& baselines) {
  validate_params(params);
  const auto started = std::chrono::steady_clock::now();
  const std::size_t J = scenario.vertex_count();
  if (J == 0) throw InvalidArgument("scenario has no vertices");

  SolveReport report;
  report.params = params;
  Rng rng(params.seed);
  std::map<Selection, OmegaResult> memo;

  const Selection s0 = stay_put(J);
  memo.emplace(s0, omega(scenario, s0, params.tsp_mode));
  Selection current = s0;
  Selection best_s = s0;
  double best = memo.at(s0).value;
  double aspiration = best;
  std::vector<TabuEntry> tabu;
  report.trace.push_back(best);

  std::size_t stall = 0;
  for (std::size_t iter = 0; iter < params.max_iter; ++iter) {
    auto candidates = neighborhood_sample(current, params.radius, params.samples_per_iter, rng);

    std::vector<Selection> todo;
    for (const auto& x : candidates) {
      if (!memo.contains(x) && std::find(todo.begin(), todo.end(), x) == todo.end()) todo.push_back(x);
    }
    auto results = evaluate_all(scenario, todo, params.threads, params.tsp_mode);
    for (std::size_t i = 0; i < todo.size(); ++i) memo.emplace(todo[i], std::move(results[i]));

    std::vector<TabuEntry> ranked;
    ranked.reserve(candidates.size());
    for (auto& x : candidates) {
      const double v = memo.at(x).value;
      ranked.push_back({std::move(x), v});
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const TabuEntry& a, const TabuEntry& b) {
      if (a.value != b.value) return a.value > b.value;
      return a.s < b.s;
    });

    bool improved = false;
    bool moved = false;
    for (const auto& [x, value] : ranked) {
      if (value > best) {
        best = value;
        best_s = x;
        improved = true;
      }
      auto it = std::find_if(tabu.begin(), tabu.end(), [&](const TabuEntry& e) { return e.s == x; });
      if (it == tabu.end()) {
        if (tabu.size() >= params.tabu_size) {
          auto worst = std::min_element(tabu.begin(), tabu.end(),
                                        [](const TabuEntry& a, const TabuEntry& b) { return a.value < b.value; });
          tabu.erase(worst);
        }
        tabu.push_back({x, value});
      } else if (value > aspiration) {
        aspiration = value;
        tabu.erase(it);
      } else {
        continue;
      }
      if (!moved) {
        current = x;
        moved = true;
      }
    }

    report.trace.push_back(best);
    report.iterations = iter + 1;
    stall = improved ? 0 : stall + 1;
    if (params.stall_limit > 0 && stall >= params.stall_limit) break;
  }

  report.best_s = best_s;
  report.best = from_omega(memo.at(best_s));
  report.evaluations = memo.size();
  for (Scheme scheme : baselines) {
    if (scheme == Scheme::Proposed) continue;
    report.baselines.emplace(scheme, evaluate_baseline(scenario, scheme, params.tsp_mode));
  }
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace jpesp
