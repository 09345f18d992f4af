#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "jpesp/search.hpp"

namespace jpesp {

struct ReportOptions {
  /// Include wall-clock fields. Off keeps reports byte-reproducible.
  bool timing = false;
};

/// Objectives of infeasible plans are written as null.
nlohmann::json scheme_to_json(const SchemeResult& result, const Scenario& scenario);
nlohmann::json report_to_json(const SolveReport& report, const Scenario& scenario, ReportOptions options = {});

/// One row per scheme: minimum class sample size, objective, total
/// transmission time and energy, and the visited vertices.
std::string format_summary(const SolveReport& report);

/// "1 -> 4 -> 2 -> 1" using vertex ids, or "stay at 1".
std::string describe_tour(const RoutePlan& route);

}  // namespace jpesp
