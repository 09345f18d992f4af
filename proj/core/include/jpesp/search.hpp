#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jpesp/allocator.hpp"
#include "jpesp/channel.hpp"
#include "jpesp/graph.hpp"
#include "jpesp/scenario.hpp"

namespace jpesp {

struct TabuParams {
  /// Maximum tabu-list size L.
  std::size_t tabu_size = 10;
  /// Neighbourhood Hamming radius Z; clipped to J - 1.
  std::size_t radius = 3;
  std::size_t samples_per_iter = 64;
  std::size_t max_iter = 100;
  std::uint64_t seed = 0;
  /// Stop after this many iterations without a better incumbent; 0 disables.
  std::size_t stall_limit = 25;
  /// Worker threads for candidate evaluation. Results do not depend on it.
  unsigned threads = 1;
  TspMode tsp_mode = TspMode::Auto;
};

/// Throws InvalidArgument for L = 0, Z = 0 or samples_per_iter = 0.
void validate_params(const TabuParams& params);

/// Draws n selections from the radius-Z ball around s_c: k uniform in
/// {1..Z}, then k distinct positions among 2..J flipped. Duplicates are kept.
std::vector<Selection> neighborhood_sample(const Selection& s_c, std::size_t radius, std::size_t n, Rng& rng);

enum class Scheme { Proposed, Fixed, FullPath, ThroughputFixed, ThroughputFull };

std::string to_string(Scheme scheme);
/// Accepts proposed, fixed, full_path, throughput_fixed, throughput_full.
Scheme parse_scheme(const std::string& name);
std::vector<Scheme> all_schemes();

struct SchemeResult {
  /// -inf when the plan cannot be executed.
  double objective = 0.0;
  RoutePlan route;
  std::optional<Allocation> allocation;
  std::string reason;

  bool feasible() const { return allocation.has_value(); }
};

/// Fixed and full-path plans solved with the F-measure objective, or with
/// the max-min throughput schedule scored afterwards (throughput_*).
SchemeResult evaluate_baseline(const Scenario& scenario, Scheme scheme, TspMode mode = TspMode::Auto);

struct SolveReport {
  Selection best_s;
  SchemeResult best;
  std::map<Scheme, SchemeResult> baselines;
  /// Incumbent objective after initialisation and after every iteration.
  std::vector<double> trace;
  std::size_t iterations = 0;
  /// Distinct selections whose objective was computed.
  std::size_t evaluations = 0;
  double wall_time_s = 0.0;
  TabuParams params;

  double objective() const { return best.objective; }
};

/// Tabu search over vertex selections starting from the stay-put plan.
/// Every candidate that beats the incumbent replaces it; non-tabu candidates
/// enter the list (evicting its worst member when full) and a tabu candidate
/// above the aspiration level is released. The current point moves to the
/// best admissible candidate of each iteration. Objectives are memoised.
SolveReport tabu_solve(const Scenario& scenario, const TabuParams& params, const std::vector<Scheme>& baselines = {});

}  // namespace jpesp
