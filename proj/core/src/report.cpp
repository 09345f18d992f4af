#include "jpesp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace jpesp {

namespace {

nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json tasks_json(const Allocation& a, const Scenario& scenario) {
  auto out = nlohmann::json::array();
  for (std::size_t m = 0; m < a.alpha.size(); ++m) {
    out.push_back({{"task", scenario.tasks[m].model.m},
                   {"alpha", a.alpha[m]},
                   {"alpha_floor", std::floor(a.alpha[m])},
                   {"fmeasure", number(a.fmeasure[m])},
                   {"fmeasure_reported", report_fmeasure(scenario.tasks[m].model, a.alpha[m])}});
  }
  return out;
}

double min_class_samples(const Allocation& a) {
  return a.class_samples.empty() ? 0.0 : *std::min_element(a.class_samples.begin(), a.class_samples.end());
}

}  // namespace

std::string describe_tour(const RoutePlan& route) {
  if (route.cycle.size() <= 1) return "stay at 1";
  std::string out;
  for (std::size_t i = 0; i < route.cycle.size(); ++i) {
    if (i) out += " -> ";
    out += std::to_string(route.cycle[i] + 1);
  }
  return out;
}

nlohmann::json scheme_to_json(const SchemeResult& r, const Scenario& scenario) {
  nlohmann::json j;
  j["feasible"] = r.feasible();
  j["objective"] = number(r.objective);
  j["s"] = to_string(r.route.s);
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (!r.route.cycle.empty()) {
    std::vector<int> ids;
    for (int v : r.route.cycle) ids.push_back(v + 1);
    j["tour"] = {{"cycle", ids},
                 {"length_m", r.route.length_m},
                 {"motion_time_s", r.route.motion_time_s},
                 {"motion_energy_j", r.route.motion_energy_j},
                 {"certified_optimal", r.route.certified_optimal}};
  }
  if (r.allocation) {
    const auto& a = *r.allocation;
    j["tasks"] = tasks_json(a, scenario);
    j["min_class_samples"] = min_class_samples(a);
    j["comm_time_s"] = a.comm_time_s;
    j["comm_energy_j"] = a.comm_energy_j;
    j["time_budget_s"] = a.time_budget_s;
    j["energy_budget_j"] = a.energy_budget_j;
    auto devices = nlohmann::json::array();
    for (std::size_t u = 0; u < a.time_s.size(); ++u) {
      devices.push_back({{"id", scenario.devices[u].id},
                         {"serving_vertex", a.serving_vertex[u] + 1},
                         {"time_s", a.time_s[u]},
                         {"energy_j", a.energy_j[u]},
                         {"power_w", a.power_w[u]}});
    }
    j["devices"] = devices;
    j["class_samples"] = a.class_samples;
  }
  return j;
}

nlohmann::json report_to_json(const SolveReport& report, const Scenario& scenario, ReportOptions options) {
  nlohmann::json j;
  j["best_s"] = to_string(report.best_s);
  j["objective"] = number(report.objective());
  j["proposed"] = scheme_to_json(report.best, scenario);
  nlohmann::json baselines = nlohmann::json::object();
  for (const auto& [scheme, result] : report.baselines) baselines[to_string(scheme)] = scheme_to_json(result, scenario);
  j["baselines"] = baselines;
  auto trace = nlohmann::json::array();
  for (double v : report.trace) trace.push_back(number(v));
  j["trace"] = trace;
  j["iterations"] = report.iterations;
  j["evaluations"] = report.evaluations;
  const auto& p = report.params;
  j["params"] = {{"tabu_size", p.tabu_size},       {"radius", p.radius},
                 {"samples_per_iter", p.samples_per_iter}, {"max_iter", p.max_iter},
                 {"seed", p.seed},                 {"stall_limit", p.stall_limit}};
  if (options.timing) j["wall_time_s"] = report.wall_time_s;
  return j;
}

std::string format_summary(const SolveReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-18s %12s %10s %12s %12s  %s\n", "scheme", "min samples", "F-measure", "time (s)",
                "energy (J)", "tour");
  out << line;
  auto row = [&](const std::string& name, const SchemeResult& r) {
    if (r.allocation) {
      const auto& a = *r.allocation;
      std::snprintf(line, sizeof line, "%-18s %12.1f %10.4f %12.2f %12.2f  %s\n", name.c_str(), min_class_samples(a),
                    r.objective, a.comm_time_s, a.comm_energy_j, describe_tour(r.route).c_str());
    } else {
      std::snprintf(line, sizeof line, "%-18s %12s %10s %12s %12s  %s\n", name.c_str(), "-", "-inf", "-", "-",
                    r.reason.c_str());
    }
    out << line;
  };
  row("proposed", report.best);
  for (const auto& [scheme, result] : report.baselines) row(to_string(scheme), result);
  return out.str();
}

}  // namespace jpesp
