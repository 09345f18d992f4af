#pragma once

#include <vector>

#include "jpesp/scenario.hpp"

namespace jpesp::test {

struct DeviceSpec {
  int task = 1;
  int cls = 1;
  std::vector<double> gains;
  std::int64_t historical = 0;
};

/// Hand-built world on a line: vertex j sits at (x[j], 0).
inline Scenario make_world(const std::vector<double>& x, const std::vector<DeviceSpec>& devices,
                           const std::vector<TaskSpec>& tasks, const PlanningConfig& config = {}) {
  Scenario s;
  s.config = config;
  for (std::size_t j = 0; j < x.size(); ++j) s.vertices.push_back({static_cast<int>(j + 1), {x[j], 0.0}});
  s.distances = Matrix<double>(x.size(), x.size(), 0.0);
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = 0; b < x.size(); ++b) s.distances(a, b) = std::abs(x[a] - x[b]);
  }
  for (std::size_t u = 0; u < devices.size(); ++u) {
    Device d;
    d.id = static_cast<int>(u + 1);
    d.task = devices[u].task;
    d.cls = devices[u].cls;
    d.gains = devices[u].gains;
    d.historical = devices[u].historical;
    s.devices.push_back(d);
  }
  s.tasks = tasks;
  return s;
}

inline TaskSpec task(int m, int classes, const char* preset = "cifar10") {
  return TaskSpec{*preset_task_model(preset, m), classes};
}

/// Random tiny world from the generator: J vertices, U devices, one task
/// with U classes.
inline Scenario tiny_world(int J, int U, std::uint64_t seed, double noise_dbm = -80.0) {
  GenerationSpec g;
  g.vertices = J;
  g.devices = U;
  g.classes_per_task = {U};
  g.seed = seed;
  g.config.noise_w = dbm_to_watt(noise_dbm);
  return generate_scenario(g);
}

}  // namespace jpesp::test
