#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jpesp/channel.hpp"
#include "jpesp/error.hpp"
#include "jpesp/learnmodel.hpp"
#include "jpesp/matrix.hpp"

namespace jpesp {

/// Budgets, vehicle motion coefficients and radio parameters.
///
/// Defaults reproduce the reference simulation setup (300 s, 2000 J,
/// 0.18 MHz, rho0 = 1e-3 at 1 m, cubic path loss, Pioneer 3DX motion
/// coefficients, unit speed, -80 dBm noise). `bits_per_sample` is one
/// 32x32x3 byte image and `epsilon` weights vehicle against device energy.
struct PlanningConfig {
  double total_time_s = 300.0;
  double energy_budget_j = 2000.0;
  double epsilon = 0.5;
  double speed_mps = 1.0;
  double gamma1 = 0.29;
  double gamma2 = 7.4;
  double bandwidth_hz = 0.18e6;
  double bits_per_sample = 24576.0;
  double noise_w = 1e-11;
  double pmax_w = 0.1;
  /// Enforce f_u <= pmax_w. Off by default.
  bool pmax_enabled = false;
  double rho0 = 1e-3;
  double d0_m = 1.0;
  double pathloss_exponent = 3.0;

  bool operator==(const PlanningConfig&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

double distance(Point a, Point b);

/// A candidate stopping point. Ids are 1-based; id 1 is the start.
struct Vertex {
  int id = 1;
  Point position;
  bool operator==(const Vertex&) const = default;
};

/// An IoT device holding samples of exactly one (task, class) pair.
struct Device {
  int id = 1;
  Point position;
  int task = 1;
  int cls = 1;
  /// Link gain |h|^2 / sigma2 towards each vertex.
  std::vector<double> gains;
  std::int64_t historical = 0;
  bool operator==(const Device&) const = default;
};

struct TaskSpec {
  TaskModel model;
  int classes = 1;
  bool operator==(const TaskSpec&) const = default;
};

/// Echo of the parameters a scenario was generated from.
struct GenerationInfo {
  double area_side_m = 0.0;
  int vertices = 0;
  int devices = 0;
  int tasks = 0;
  std::vector<int> classes_per_task;
  double noise_dbm = 0.0;
  bool operator==(const GenerationInfo&) const = default;
};

struct Scenario {
  PlanningConfig config;
  std::vector<Vertex> vertices;
  /// J x J metres; +inf marks a missing edge.
  Matrix<double> distances;
  std::vector<Device> devices;
  std::vector<TaskSpec> tasks;
  std::uint64_t seed = 0;
  std::optional<GenerationInfo> generation;

  bool operator==(const Scenario&) const = default;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t device_count() const { return devices.size(); }
};

struct GenerationSpec {
  double area_side_m = 20.0;
  int vertices = 12;
  int devices = 10;
  int tasks = 1;
  /// One entry per task; a single entry is broadcast to every task.
  std::vector<int> classes_per_task{10};
  PlanningConfig config;
  std::uint64_t seed = 0;
  /// Task models by preset name; empty selects cifar10, fashion_mnist,
  /// cifar10, ... in task order.
  std::vector<std::string> task_presets;
  /// Optional square-grid feasible-edge mask: false marks a missing edge.
  std::optional<Matrix<std::uint8_t>> edge_mask;
};

/// Builds a random world: uniform vertices (vertex 1 the start) and devices
/// in the square, Euclidean distances, Rayleigh gains per (device, vertex).
/// Devices are assigned round-robin over every (task, class) pair, extras
/// uniformly at random. Deterministic in `spec.seed`; channel draws do not
/// depend on the noise power, so regenerating with a different sigma2 only
/// rescales the gains.
Scenario generate_scenario(const GenerationSpec& spec);

/// Reports every broken invariant with a stable code, e.g.
/// `config.epsilon_out_of_range` or `group_empty(c=2,m=1)`.
Violations validate_scenario(const Scenario& s);

/// Class groups G_{c,m} in (task, class) order, with historical totals.
std::vector<ClassGroup> class_groups(const Scenario& s);

/// Task models in task order.
std::vector<TaskModel> task_models(const Scenario& s);

/// Copy of `s` with the noise power changed and gains rescaled accordingly.
Scenario with_noise(const Scenario& s, double noise_w);

void save_scenario(const Scenario& s, const std::string& path);
Scenario load_scenario(const std::string& path);

std::string scenario_to_string(const Scenario& s);
Scenario scenario_from_string(const std::string& text);

}  // namespace jpesp
