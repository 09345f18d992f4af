#include "jpesp/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/lambert_w.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace jpesp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHuge = 1e300;
constexpr double kLn2 = std::numbers::ln2;

// (1 + xi) ln(1 + xi) - xi, accurate for small xi.
double cost_balance(double xi) {
  if (xi < 1e-2) {
    double term = xi * xi;
    double sum = 0.0;
    for (int k = 2; k <= 9; ++k) {
      sum += (k % 2 == 0 ? 1.0 : -1.0) * term / (k * (k - 1.0));
      term *= xi;
    }
    return sum;
  }
  return (1.0 + xi) * std::log1p(xi) - xi;
}

// Solves (1 + xi) ln(1 + xi) - xi = q for xi >= 0; xi = G * p is the
// cost-minimising SNR of a link whose time/energy price ratio times gain is q.
double optimal_snr(double q) {
  if (!(q > 0.0)) return 0.0;
  if (std::isinf(q)) return kInf;
  double xi;
  if (q < 1e-6) {
    xi = std::sqrt(2.0 * q);
  } else {
    const double w = boost::math::lambert_w0((q - 1.0) / std::numbers::e);
    xi = std::expm1(1.0 + w);
  }
  for (int i = 0; i < 6; ++i) {
    const double slope = std::log1p(xi);
    if (!(slope > 0.0)) break;
    const double step = (cost_balance(xi) - q) / slope;
    const double next = xi - step;
    xi = next > 0.0 ? next : xi / 2.0;
    if (std::abs(step) <= 1e-15 * xi) break;
  }
  return xi;
}

// Time and energy spent per unit of "need" (seconds * log2(1 + SNR)) on a
// link running at the cost-minimising power for price ratio exp(log_rho).
struct LinkCosts {
  std::vector<double> time;
  std::vector<double> energy;
};

struct Frontier {
  std::span<const double> gains;
  double pmax = kInf;

  LinkCosts costs(double log_rho) const {
    LinkCosts c;
    c.time.resize(gains.size());
    c.energy.resize(gains.size());
    for (std::size_t k = 0; k < gains.size(); ++k) {
      const double g = gains[k];
      if (!(g > 0.0)) {
        c.time[k] = kHuge;
        c.energy[k] = kHuge;
        continue;
      }
      const double q = std::exp(std::min(log_rho + std::log(g), 690.0));
      double xi = optimal_snr(q);
      xi = std::min(xi, g * pmax);
      const double rate = std::log1p(xi) / kLn2;
      if (!(rate > 0.0)) {
        c.time[k] = kHuge;
        c.energy[k] = kHuge;
        continue;
      }
      c.time[k] = 1.0 / rate;
      // xi / log1p(xi) -> 1 as xi -> 0; keep it exact there.
      const double ratio = xi < 1e-8 ? 1.0 + xi / 2.0 : xi / std::log1p(xi);
      c.energy[k] = ratio * kLn2 / g;
    }
    return c;
  }
};

// Demand of each link as a function of a scalar target level t.
using NeedFn = std::function<void(double, std::span<double>)>;

struct TargetSearch {
  const Frontier& frontier;
  const NeedFn& need;
  double t_lo;
  double t_hi;
  double time_budget;
  double energy_budget;

  mutable std::vector<double> scratch;

  double usage(std::span<const double> per_need, double t) const {
    scratch.resize(per_need.size());
    need(t, scratch);
    double total = 0.0;
    for (std::size_t k = 0; k < per_need.size(); ++k) {
      if (scratch[k] > 0.0) total += scratch[k] * per_need[k];
    }
    return std::min(total, kHuge);
  }

  // Largest t in [t_lo, t_hi] whose demand fits in `budget`.
  double max_target(std::span<const double> per_need, double budget) const {
    auto f = [&](double t) { return usage(per_need, t) - budget; };
    if (f(t_hi) <= 0.0) return t_hi;
    if (f(t_lo) > 0.0) return t_lo;
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(f, t_lo, t_hi, boost::math::tools::eps_tolerance<double>(52), iters);
    // `a` is on the feasible side of the bracket.
    return f(b) <= 0.0 ? b : a;
  }

  struct Point {
    double log_rho = 0.0;
    double by_time = 0.0;
    double by_energy = 0.0;
    double target() const { return std::min(by_time, by_energy); }
    double gap() const { return by_time - by_energy; }
  };

  Point at(double log_rho) const {
    const LinkCosts c = frontier.costs(log_rho);
    return {log_rho, max_target(c.time, time_budget), max_target(c.energy, energy_budget)};
  }

  // The time-limited target rises with rho and the energy-limited one falls;
  // the optimum is where they cross.
  Point solve(double log_rho_guess) const {
    constexpr double kLimit = 700.0;
    Point lo = at(log_rho_guess);
    Point hi = lo;
    double step = 2.0;
    while (lo.gap() >= 0.0 && lo.log_rho > -kLimit) {
      hi = lo;
      lo = at(std::max(lo.log_rho - step, -kLimit));
      step *= 2.0;
    }
    step = 2.0;
    while (hi.gap() <= 0.0 && hi.log_rho < kLimit) {
      lo = hi;
      hi = at(std::min(hi.log_rho + step, kLimit));
      step *= 2.0;
    }
    if (lo.gap() >= 0.0) return lo;
    if (hi.gap() <= 0.0) return hi;

    auto h = [&](double l) { return at(l).gap(); };
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(h, lo.log_rho, hi.log_rho, lo.gap(), hi.gap(),
                                                          boost::math::tools::eps_tolerance<double>(48), iters);
    const Point pa = at(a);
    const Point pb = at(b);
    return pa.target() >= pb.target() ? pa : pb;
  }
};

struct LinkShares {
  std::vector<double> time;
  std::vector<double> energy;
};

LinkShares allocate(const Frontier& frontier, const NeedFn& need, double t_lo, double t_hi, ResidualBudget budget) {
  TargetSearch search{frontier, need, t_lo, t_hi, budget.time_s, budget.energy_j, {}};
  const auto best = search.solve(std::log(budget.energy_j / budget.time_s));
  const double t = best.target();
  const LinkCosts c = frontier.costs(best.log_rho);
  std::vector<double> needs(frontier.gains.size());
  need(t, needs);
  LinkShares out;
  out.time.assign(needs.size(), 0.0);
  out.energy.assign(needs.size(), 0.0);
  double used_t = 0.0, used_e = 0.0;
  for (std::size_t k = 0; k < needs.size(); ++k) {
    if (!(needs[k] > 0.0)) continue;
    out.time[k] = needs[k] * c.time[k];
    out.energy[k] = needs[k] * c.energy[k];
    used_t += out.time[k];
    used_e += out.energy[k];
  }
  const double slack = 1e-9;
  if (!(used_t <= budget.time_s * (1.0 + slack)) || !(used_e <= budget.energy_j * (1.0 + slack))) {
    throw InfeasibleError("inner allocation: no positive sample count fits the residual budgets");
  }
  // Trim rounding so the schedule never exceeds the budgets.
  const double st = used_t > budget.time_s ? budget.time_s / used_t : 1.0;
  const double se = used_e > budget.energy_j ? budget.energy_j / used_e : 1.0;
  for (std::size_t k = 0; k < needs.size(); ++k) {
    out.time[k] *= st;
    out.energy[k] *= se;
  }
  return out;
}

double required_alpha(const TaskModel& model, double target) {
  const auto [lo, hi] = attainable_range(model);
  if (target <= lo) return 0.0;
  if (target >= hi) return kInf;
  return invert_fmeasure(model, target);
}

ResidualBudget checked_budget(const Scenario& scenario, const RoutePlan& route) {
  const ResidualBudget b = residual_budget(scenario.config, route);
  if (!(b.time_s > 0.0)) throw InfeasibleError("route leaves no time for communication");
  if (!(b.energy_j > 0.0)) throw InfeasibleError("route leaves no energy for communication");
  return b;
}

double pmax_of(const PlanningConfig& c) { return c.pmax_enabled ? c.pmax_w : kInf; }

// Largest per-link need any single link could satisfy with the whole budget.
double need_upper_bound(std::span<const double> gains, ResidualBudget b, double pmax) {
  double g_max = 0.0;
  for (double g : gains) g_max = std::max(g_max, g);
  const double power = std::min(b.energy_j / b.time_s, pmax);
  return b.time_s * std::log2(1.0 + power * g_max);
}

}  // namespace

EffectiveGain effective_gain(const Selection& s, std::span<const double> gains) {
  if (s.size() != gains.size()) throw InvalidArgument("effective_gain: s and gains differ in length");
  EffectiveGain best{-kInf, -1};
  for (std::size_t l = 0; l < s.size(); ++l) {
    if (s[l] && gains[l] > best.gain) best = {gains[l], static_cast<int>(l)};
  }
  if (best.vertex < 0) throw InvalidArgument("effective_gain: no vertex selected");
  return best;
}

ResidualBudget residual_budget(const PlanningConfig& config, const RoutePlan& route) {
  return {config.total_time_s - route.motion_time_s, config.energy_budget_j - config.epsilon * route.motion_energy_j};
}

double perspective_capacity(double time_s, double energy_j, double gain) {
  if (!(time_s > 0.0)) return 0.0;
  return time_s * std::log2(1.0 + energy_j / time_s * gain);
}

Allocation score_allocation(const Scenario& scenario, const RoutePlan& route, std::vector<double> time_s,
                            std::vector<double> energy_j) {
  const auto& cfg = scenario.config;
  const std::size_t U = scenario.devices.size();
  if (time_s.size() != U || energy_j.size() != U) throw InvalidArgument("score_allocation: one entry per device");
  Allocation a;
  a.time_s = std::move(time_s);
  a.energy_j = std::move(energy_j);
  a.power_w.assign(U, 0.0);
  a.serving_vertex.assign(U, 0);
  a.effective_gain.assign(U, 0.0);
  std::vector<double> delivered(U, 0.0);
  for (std::size_t u = 0; u < U; ++u) {
    const auto eg = effective_gain(route.s, scenario.devices[u].gains);
    a.serving_vertex[u] = eg.vertex;
    a.effective_gain[u] = eg.gain;
    if (a.time_s[u] > 0.0) a.power_w[u] = a.energy_j[u] / a.time_s[u];
    delivered[u] = cfg.bandwidth_hz / cfg.bits_per_sample * perspective_capacity(a.time_s[u], a.energy_j[u], eg.gain);
    a.comm_time_s += a.time_s[u];
    a.comm_energy_j += a.energy_j[u];
  }
  const auto groups = class_groups(scenario);
  const auto models = task_models(scenario);
  a.alpha.assign(models.size(), kInf);
  for (const auto& g : groups) {
    double y = g.historical;
    for (int u : g.devices) y += delivered[static_cast<std::size_t>(u)];
    a.class_samples.push_back(y);
    auto& alpha = a.alpha[static_cast<std::size_t>(g.task - 1)];
    alpha = std::min(alpha, y);
  }
  a.objective = kInf;
  for (std::size_t m = 0; m < models.size(); ++m) {
    if (std::isinf(a.alpha[m])) a.alpha[m] = 0.0;
    a.fmeasure.push_back(eval_fmeasure_extended(models[m], a.alpha[m]));
    a.objective = std::min(a.objective, a.fmeasure.back());
  }
  const auto budget = residual_budget(cfg, route);
  a.time_budget_s = budget.time_s;
  a.energy_budget_j = budget.energy_j;
  return a;
}

Allocation solve_inner(const Scenario& scenario, const RoutePlan& route) {
  const auto budget = checked_budget(scenario, route);
  const auto& cfg = scenario.config;
  const auto groups = class_groups(scenario);
  const auto models = task_models(scenario);
  const std::size_t U = scenario.devices.size();

  // One link per class: its best-placed device.
  std::vector<double> link_gain(groups.size(), 0.0);
  std::vector<int> link_device(groups.size(), -1);
  double max_hist = 0.0;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    for (int u : groups[k].devices) {
      const double g = effective_gain(route.s, scenario.devices[static_cast<std::size_t>(u)].gains).gain;
      if (link_device[k] < 0 || g > link_gain[k]) {
        link_gain[k] = g;
        link_device[k] = u;
      }
    }
    max_hist = std::max(max_hist, groups[k].historical);
  }

  const double per_sample = cfg.bits_per_sample / cfg.bandwidth_hz;
  const Frontier frontier{link_gain, pmax_of(cfg)};
  NeedFn need = [&](double t, std::span<double> out) {
    for (std::size_t k = 0; k < groups.size(); ++k) {
      const double alpha = required_alpha(models[static_cast<std::size_t>(groups[k].task - 1)], t);
      out[k] = std::max(0.0, alpha - groups[k].historical) * per_sample;
    }
  };

  const double alpha_ub = 2.0 * (need_upper_bound(link_gain, budget, frontier.pmax) / per_sample + max_hist) + 1.0;
  constexpr double kAlphaFloor = 1e-9;
  double t_lo = kInf, t_hi = kInf;
  for (const auto& m : models) {
    t_lo = std::min(t_lo, eval_fmeasure_extended(m, kAlphaFloor));
    t_hi = std::min(t_hi, eval_fmeasure_extended(m, alpha_ub));
  }
  if (!(t_hi > t_lo)) t_hi = t_lo;

  const LinkShares shares = allocate(frontier, need, t_lo, t_hi, budget);
  std::vector<double> time(U, 0.0), energy(U, 0.0);
  for (std::size_t k = 0; k < groups.size(); ++k) {
    if (link_device[k] < 0) continue;
    time[static_cast<std::size_t>(link_device[k])] = shares.time[k];
    energy[static_cast<std::size_t>(link_device[k])] = shares.energy[k];
  }
  return score_allocation(scenario, route, std::move(time), std::move(energy));
}

Allocation solve_throughput_baseline(const Scenario& scenario, const RoutePlan& route) {
  const auto budget = checked_budget(scenario, route);
  const std::size_t U = scenario.devices.size();
  std::vector<double> gains(U);
  for (std::size_t u = 0; u < U; ++u) gains[u] = effective_gain(route.s, scenario.devices[u].gains).gain;
  const Frontier frontier{gains, pmax_of(scenario.config)};
  NeedFn need = [](double t, std::span<double> out) { std::fill(out.begin(), out.end(), t); };
  const double t_hi = 1.01 * need_upper_bound(gains, budget, frontier.pmax);
  const bool dead_link = std::any_of(gains.begin(), gains.end(), [](double g) { return !(g > 0.0); });
  LinkShares shares;
  if (dead_link || !(t_hi > 0.0)) {
    shares.time.assign(U, 0.0);
    shares.energy.assign(U, 0.0);
  } else {
    shares = allocate(frontier, need, 0.0, t_hi, budget);
  }
  return score_allocation(scenario, route, std::move(shares.time), std::move(shares.energy));
}

Schedule expand_allocation(const Allocation& alloc, const Scenario& scenario, const Selection& s) {
  const std::size_t U = scenario.devices.size();
  const std::size_t J = s.size();
  Schedule out{Matrix<double>(U, J, 0.0), Matrix<double>(U, J, 0.0)};
  for (std::size_t u = 0; u < U; ++u) {
    if (!(alloc.time_s[u] > 0.0)) continue;
    const auto j = static_cast<std::size_t>(effective_gain(s, scenario.devices[u].gains).vertex);
    out.time_s(u, j) = alloc.time_s[u];
    out.power_w(u, j) = alloc.energy_j[u] / alloc.time_s[u];
  }
  return out;
}

OmegaResult omega(const Scenario& scenario, const Selection& s, TspMode mode) {
  OmegaResult out;
  out.value = -kInf;
  try {
    out.route = plan_route(s, scenario.distances, scenario.config, mode);
  } catch (const InfeasibleError& e) {
    out.route.s = s;
    out.reason = e.what();
    return out;
  }
  try {
    out.allocation = solve_inner(scenario, out.route);
    out.value = out.allocation->objective;
  } catch (const InfeasibleError& e) {
    out.reason = e.what();
  }
  return out;
}

}  // namespace jpesp
