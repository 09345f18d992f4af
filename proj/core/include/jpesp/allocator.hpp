#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jpesp/graph.hpp"
#include "jpesp/matrix.hpp"
#include "jpesp/scenario.hpp"

namespace jpesp {

/// Best selected vertex for one device: M_u(s) = max_l s_l F_{u,l}.
struct EffectiveGain {
  double gain = 0.0;
  /// 0-based vertex index; ties go to the lowest index.
  int vertex = 0;
};

EffectiveGain effective_gain(const Selection& s, std::span<const double> gains);

/// Per-device transmit schedule in reduced form: device u transmits only at
/// its serving vertex, for time_s[u] seconds using energy_j[u] joules.
struct Allocation {
  std::vector<double> time_s;
  std::vector<double> energy_j;
  std::vector<double> power_w;
  std::vector<int> serving_vertex;
  std::vector<double> effective_gain;
  /// y_{c,m} in class_groups() order, historical samples included.
  std::vector<double> class_samples;
  /// Minority-class sample size per task.
  std::vector<double> alpha;
  /// Unclamped model value per task.
  std::vector<double> fmeasure;
  double objective = 0.0;
  double comm_time_s = 0.0;
  double comm_energy_j = 0.0;
  /// Budgets left after the tour: T_all - motion time, E_all - eps * motion energy.
  double time_budget_s = 0.0;
  double energy_budget_j = 0.0;
};

/// Full schedule {t_{u,j}, p_{u,j}}, U x J.
struct Schedule {
  Matrix<double> time_s;
  Matrix<double> power_w;
};

struct ResidualBudget {
  double time_s = 0.0;
  double energy_j = 0.0;
};

/// Budgets left for communication once the route is driven. Either may be <= 0.
ResidualBudget residual_budget(const PlanningConfig& config, const RoutePlan& route);

/// e * log2(1 + (delta / e) * gain), extended by 0 at e = 0.
double perspective_capacity(double time_s, double energy_j, double gain);

/// Max-min F-measure allocation for a fixed route.
///
/// Within a class only the device with the largest effective gain needs
/// airtime, so each class reduces to one link. For a price ratio rho between
/// time and energy, every link's cost-minimising power solves
/// x ln x - x + 1 = G rho with x = 1 + G p, which makes the time and energy
/// needed per delivered sample closed-form in rho. The optimum sits where
/// the target F-measure supported by the time budget meets the one supported
/// by the energy budget; that crossing is found by bracketing in log rho.
///
/// Throws InfeasibleError if either residual budget is not positive or no
/// positive sample count is reachable.
Allocation solve_inner(const Scenario& scenario, const RoutePlan& route);

/// Same feasible set, but maximises the minimum number of bits delivered by
/// any device. The schedule is then scored with the F-measure objective.
Allocation solve_throughput_baseline(const Scenario& scenario, const RoutePlan& route);

/// Recomputes samples, alpha and objective for a given reduced schedule.
Allocation score_allocation(const Scenario& scenario, const RoutePlan& route, std::vector<double> time_s,
                            std::vector<double> energy_j);

/// Places e_u and f_u = delta_u / e_u at the serving vertex, zeros elsewhere.
Schedule expand_allocation(const Allocation& alloc, const Scenario& scenario, const Selection& s);

struct OmegaResult {
  /// min_m Phi_m(alpha_m); -inf for a plan that cannot be executed.
  double value = 0.0;
  RoutePlan route;
  std::optional<Allocation> allocation;
  /// Why the plan is infeasible, empty otherwise.
  std::string reason;

  bool feasible() const { return allocation.has_value(); }
};

/// Objective of a vertex selection: shortest tour, then the inner allocation.
OmegaResult omega(const Scenario& scenario, const Selection& s, TspMode mode = TspMode::Auto);

}  // namespace jpesp
