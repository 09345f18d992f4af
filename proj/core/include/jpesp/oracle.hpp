#pragma once

#include <vector>

#include "jpesp/allocator.hpp"
#include "jpesp/graph.hpp"
#include "jpesp/matrix.hpp"
#include "jpesp/scenario.hpp"

// Slow brute-force references for checking the solvers.
namespace jpesp::oracle {

inline constexpr std::size_t kBruteForceTspLimit = 9;
inline constexpr std::size_t kEnumerateLimit = 10;
inline constexpr std::size_t kGridMaxDevices = 2;
inline constexpr std::size_t kGridMaxVertices = 3;
inline constexpr std::size_t kGridMaxSteps = 200;

struct BruteTour {
  EdgeMatrix edges;
  /// +inf when every ordering uses a missing edge.
  double length_m = 0.0;
};

/// Scans every ordering of the selected vertices after the start.
/// Throws RefusedError above kBruteForceTspLimit selected vertices.
BruteTour tsp_brute_force(const Selection& s, const Matrix<double>& distances);

struct BestSelection {
  Selection s;
  OmegaResult result;
};

/// Evaluates omega on all 2^(J-1) selections; ties go to the
/// lexicographically smallest s. Throws RefusedError for J > j_cap.
BestSelection enumerate_best_s(const Scenario& scenario, std::size_t j_cap = kEnumerateLimit,
                               TspMode mode = TspMode::Exact);

struct GridOptimum {
  /// -inf when no grid point is feasible.
  double value = 0.0;
  /// Unreduced schedule t_{u,j}, p_{u,j} of the best grid point.
  Matrix<double> time_s;
  Matrix<double> power_w;
  double time_step_s = 0.0;
  double energy_step_j = 0.0;
};

/// Dense grid over the per-(device, vertex) time and energy, each on
/// {0, 1/n, ..., 1} of the residual budget, maximising the F-measure
/// objective for the given tour. Power is energy / time, so the grid reaches
/// up to E' / (T' / n). Throws RefusedError beyond kGridMaxDevices devices,
/// kGridMaxVertices selected vertices or kGridMaxSteps steps.
GridOptimum grid_inner_oracle(const Scenario& scenario, const Selection& s, const EdgeMatrix& edges,
                              std::size_t grid_n);

}  // namespace jpesp::oracle
