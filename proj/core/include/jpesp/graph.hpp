#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jpesp/error.hpp"
#include "jpesp/matrix.hpp"

namespace jpesp {

struct PlanningConfig;

/// Vertex-selection vector s; entry 0 is the start vertex and must be 1.
using Selection = std::vector<std::uint8_t>;

/// Directed edge-selection matrix E; E(i, j) = 1 means the vehicle drives i -> j.
using EdgeMatrix = Matrix<std::uint8_t>;

/// Selection containing only the start vertex.
Selection stay_put(std::size_t vertices);
/// Selection containing every vertex.
Selection all_vertices(std::size_t vertices);
std::size_t selected_count(const Selection& s);
/// "1011..." rendering, start vertex first.
std::string to_string(const Selection& s);

/// A closed tour over the selected vertices plus its motion costs. Vertex
/// indices in `cycle` are 0-based; the cycle starts and ends at 0.
struct RoutePlan {
  Selection s;
  EdgeMatrix edges;
  std::vector<int> cycle;
  double length_m = 0.0;
  double motion_time_s = 0.0;
  double motion_energy_j = 0.0;
  /// False when the tour came from the 2-opt heuristic.
  bool certified_optimal = true;
};

/// Checks E against the mobility set Q(s): binariness, s_1 = 1, no
/// self-loops, in/out-degree equal to s_j, and a single cycle through every
/// selected vertex (checked by walking successors from the start). A lone
/// start vertex with E = 0 is the valid stay-put plan.
///
/// Codes: `shape_mismatch`, `not_binary`, `start_not_selected`, `self_loop`,
/// `degree_mismatch`, `stay_put_has_edges`, `not_single_cycle`.
Violations validate_route(const Selection& s, const EdgeMatrix& edges, const Matrix<double>& distances);

/// Tr(D^T E). Throws InfeasibleError if a used edge has infinite length.
double tour_length(const EdgeMatrix& edges, const Matrix<double>& distances);

/// length * (gamma1 / v + gamma2)
double motion_energy(double length_m, double speed_mps, double gamma1, double gamma2);
/// length / v
double motion_time(double length_m, double speed_mps);

enum class TspMode {
  /// Held-Karp over subsets; optimal.
  Exact,
  /// Nearest neighbour followed by first-improvement 2-opt.
  Heuristic,
  /// Exact up to kExactTspLimit selected vertices, heuristic above.
  Auto,
};

inline constexpr std::size_t kExactTspLimit = 15;
/// Largest selection TspMode::Exact accepts (memory grows as 2^k * k).
inline constexpr std::size_t kExactTspHardLimit = 20;

struct TspResult {
  EdgeMatrix edges;
  double length_m = 0.0;
  bool certified_optimal = true;
};

/// Minimum-length E in Q(s). Throws InfeasibleError when no finite tour
/// exists and InvalidArgument when s does not select the start vertex.
TspResult solve_tsp(const Selection& s, const Matrix<double>& distances, TspMode mode = TspMode::Auto);

/// Ordered visit list (0, r2, ..., rk, 0); {0} for the stay-put plan.
/// Throws InvalidArgument when E is not a single cycle through vertex 0.
std::vector<int> cycle_of(const EdgeMatrix& edges);

/// Edge matrix of a closed cycle given as (0, ..., 0).
EdgeMatrix edges_of_cycle(const std::vector<int>& cycle, std::size_t vertices);

double cycle_length(const std::vector<int>& cycle, const Matrix<double>& distances);

/// Solves the TSP for s and fills in motion costs from `config`.
RoutePlan plan_route(const Selection& s, const Matrix<double>& distances, const PlanningConfig& config,
                     TspMode mode = TspMode::Auto);

}  // namespace jpesp
