#include "jpesp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace jpesp {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string group_tag(int c, int m) {
  return "(c=" + std::to_string(c) + ",m=" + std::to_string(m) + ")";
}

// ---- JSON decoding helpers ------------------------------------------------

const json& field(const json& obj, const std::string& path, const std::string& key) {
  const std::string full = path.empty() ? key : path + "." + key;
  if (!obj.is_object()) throw ParseError("expected object at " + (path.empty() ? "<root>" : path));
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing field " + full);
  return *it;
}

double number(const json& obj, const std::string& path, const std::string& key) {
  const json& v = field(obj, path, key);
  if (v.is_null()) return kInf;
  if (!v.is_number()) throw ParseError("field " + path + "." + key + " is not a number");
  return v.get<double>();
}

long long integer(const json& obj, const std::string& path, const std::string& key) {
  const json& v = field(obj, path, key);
  if (!v.is_number_integer()) throw ParseError("field " + path + "." + key + " is not an integer");
  return v.get<long long>();
}

const json& array(const json& obj, const std::string& path, const std::string& key) {
  const json& v = field(obj, path, key);
  if (!v.is_array()) throw ParseError("field " + (path.empty() ? key : path + "." + key) + " is not an array");
  return v;
}

json encode_number(double v) {
  if (std::isinf(v) && v > 0) return nullptr;
  return v;
}

double decode_number(const json& v, const std::string& where) {
  if (v.is_null()) return kInf;
  if (!v.is_number()) throw ParseError(where + " is not a number");
  return v.get<double>();
}

json encode_config(const PlanningConfig& c) {
  return json{{"T_all", c.total_time_s},
              {"E_all", c.energy_budget_j},
              {"epsilon", c.epsilon},
              {"v", c.speed_mps},
              {"gamma1", c.gamma1},
              {"gamma2", c.gamma2},
              {"B", c.bandwidth_hz},
              {"A", c.bits_per_sample},
              {"sigma2", c.noise_w},
              {"P_max", c.pmax_w},
              {"P_max_enabled", c.pmax_enabled},
              {"rho0", c.rho0},
              {"d0", c.d0_m},
              {"pathloss_exponent", c.pathloss_exponent}};
}

PlanningConfig decode_config(const json& j) {
  const std::string p = "config";
  PlanningConfig c;
  c.total_time_s = number(j, p, "T_all");
  c.energy_budget_j = number(j, p, "E_all");
  c.epsilon = number(j, p, "epsilon");
  c.speed_mps = number(j, p, "v");
  c.gamma1 = number(j, p, "gamma1");
  c.gamma2 = number(j, p, "gamma2");
  c.bandwidth_hz = number(j, p, "B");
  c.bits_per_sample = number(j, p, "A");
  c.noise_w = number(j, p, "sigma2");
  c.pmax_w = number(j, p, "P_max");
  const json& enabled = field(j, p, "P_max_enabled");
  if (!enabled.is_boolean()) throw ParseError("field config.P_max_enabled is not a boolean");
  c.pmax_enabled = enabled.get<bool>();
  c.rho0 = number(j, p, "rho0");
  c.d0_m = number(j, p, "d0");
  c.pathloss_exponent = number(j, p, "pathloss_exponent");
  return c;
}

json encode(const Scenario& s) {
  json out;
  if (s.generation) {
    const auto& g = *s.generation;
    out["header"] = json{{"generator", "jpesp gen"},
                         {"area_side_m", g.area_side_m},
                         {"J", g.vertices},
                         {"U", g.devices},
                         {"M", g.tasks},
                         {"classes_per_task", g.classes_per_task},
                         {"noise_dbm", g.noise_dbm}};
  }
  out["config"] = encode_config(s.config);
  json vertices = json::array();
  for (const auto& v : s.vertices) {
    vertices.push_back(json{{"id", v.id}, {"x", v.position.x}, {"y", v.position.y}});
  }
  out["vertices"] = std::move(vertices);
  json dist = json::array();
  for (std::size_t i = 0; i < s.distances.rows(); ++i) {
    json row = json::array();
    for (double d : s.distances.row(i)) row.push_back(encode_number(d));
    dist.push_back(std::move(row));
  }
  out["distances"] = std::move(dist);
  json devices = json::array();
  for (const auto& d : s.devices) {
    json gains = json::array();
    for (double g : d.gains) gains.push_back(encode_number(g));
    devices.push_back(json{{"id", d.id},
                           {"x", d.position.x},
                           {"y", d.position.y},
                           {"task", d.task},
                           {"class", d.cls},
                           {"gains", std::move(gains)},
                           {"historical", d.historical}});
  }
  out["devices"] = std::move(devices);
  json tasks = json::array();
  for (const auto& t : s.tasks) {
    tasks.push_back(json{{"m", t.model.m},
                         {"classes", t.classes},
                         {"theta1", t.model.theta1},
                         {"theta2", t.model.theta2},
                         {"theta3", t.model.theta3}});
  }
  out["tasks"] = std::move(tasks);
  out["seed"] = s.seed;
  return out;
}

Scenario decode(const json& j) {
  Scenario s;
  if (auto it = j.find("header"); it != j.end() && it->is_object()) {
    GenerationInfo g;
    const std::string p = "header";
    g.area_side_m = number(*it, p, "area_side_m");
    g.vertices = static_cast<int>(integer(*it, p, "J"));
    g.devices = static_cast<int>(integer(*it, p, "U"));
    g.tasks = static_cast<int>(integer(*it, p, "M"));
    for (const auto& c : array(*it, p, "classes_per_task")) g.classes_per_task.push_back(c.get<int>());
    g.noise_dbm = number(*it, p, "noise_dbm");
    s.generation = g;
  }
  s.config = decode_config(field(j, "", "config"));

  const json& verts = array(j, "", "vertices");
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const std::string p = "vertices[" + std::to_string(i) + "]";
    s.vertices.push_back(Vertex{static_cast<int>(integer(verts[i], p, "id")),
                                {number(verts[i], p, "x"), number(verts[i], p, "y")}});
  }
  const std::size_t J = s.vertices.size();

  const json& dist = array(j, "", "distances");
  if (dist.size() != J) throw ParseError("distances not J×J");
  s.distances = Matrix<double>(J, J);
  for (std::size_t r = 0; r < J; ++r) {
    if (!dist[r].is_array() || dist[r].size() != J) throw ParseError("distances not J×J");
    for (std::size_t c = 0; c < J; ++c) {
      s.distances(r, c) =
          decode_number(dist[r][c], "distances[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }

  const json& devs = array(j, "", "devices");
  for (std::size_t i = 0; i < devs.size(); ++i) {
    const std::string p = "devices[" + std::to_string(i) + "]";
    Device d;
    d.id = static_cast<int>(integer(devs[i], p, "id"));
    d.position = {number(devs[i], p, "x"), number(devs[i], p, "y")};
    d.task = static_cast<int>(integer(devs[i], p, "task"));
    d.cls = static_cast<int>(integer(devs[i], p, "class"));
    const json& gains = array(devs[i], p, "gains");
    if (gains.size() != J) throw ParseError(p + ".gains length differs from J");
    for (std::size_t g = 0; g < gains.size(); ++g) {
      d.gains.push_back(decode_number(gains[g], p + ".gains[" + std::to_string(g) + "]"));
    }
    d.historical = integer(devs[i], p, "historical");
    s.devices.push_back(std::move(d));
  }

  const json& tasks = array(j, "", "tasks");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string p = "tasks[" + std::to_string(i) + "]";
    TaskSpec t;
    t.model.m = static_cast<int>(integer(tasks[i], p, "m"));
    t.classes = static_cast<int>(integer(tasks[i], p, "classes"));
    t.model.theta1 = number(tasks[i], p, "theta1");
    t.model.theta2 = number(tasks[i], p, "theta2");
    t.model.theta3 = number(tasks[i], p, "theta3");
    s.tasks.push_back(t);
  }
  const json& seed = field(j, "", "seed");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) throw ParseError("field seed is not an integer");
  s.seed = seed.get<std::uint64_t>();
  return s;
}

}  // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Scenario generate_scenario(const GenerationSpec& spec) {
  if (spec.vertices < 1) throw InvalidArgument("generate_scenario: need at least one vertex");
  if (spec.devices < 1) throw InvalidArgument("generate_scenario: need at least one device");
  if (spec.tasks < 1) throw InvalidArgument("generate_scenario: need at least one task");
  if (!(spec.area_side_m > 0.0)) throw InvalidArgument("generate_scenario: area side must be > 0");
  if (spec.classes_per_task.empty() ||
      (spec.classes_per_task.size() != 1 &&
       spec.classes_per_task.size() != static_cast<std::size_t>(spec.tasks))) {
    throw InvalidArgument("generate_scenario: classes_per_task must have 1 or M entries");
  }
  std::vector<int> classes(static_cast<std::size_t>(spec.tasks));
  for (int m = 0; m < spec.tasks; ++m) {
    classes[m] = spec.classes_per_task.size() == 1 ? spec.classes_per_task[0] : spec.classes_per_task[m];
    if (classes[m] < 1) throw InvalidArgument("generate_scenario: every task needs at least one class");
  }
  int total_classes = 0;
  for (int c : classes) total_classes += c;
  if (spec.devices < total_classes) {
    throw InvalidArgument("generate_scenario: classes exceed devices (" + std::to_string(total_classes) +
                          " classes, " + std::to_string(spec.devices) + " devices); some class would be empty");
  }

  const auto J = static_cast<std::size_t>(spec.vertices);
  if (spec.edge_mask && (spec.edge_mask->rows() != J || spec.edge_mask->cols() != J)) {
    throw InvalidArgument("generate_scenario: edge mask must be J x J");
  }

  Scenario s;
  s.config = spec.config;
  s.seed = spec.seed;
  Rng rng(spec.seed);
  std::uniform_real_distribution<double> coord(0.0, spec.area_side_m);

  for (int j = 0; j < spec.vertices; ++j) {
    const double x = coord(rng);
    const double y = coord(rng);
    s.vertices.push_back(Vertex{j + 1, {x, y}});
  }
  s.distances = Matrix<double>(J, J, 0.0);
  for (std::size_t a = 0; a < J; ++a) {
    for (std::size_t b = 0; b < J; ++b) {
      if (a == b) continue;
      const bool open = !spec.edge_mask || (*spec.edge_mask)(a, b) != 0;
      s.distances(a, b) = open ? distance(s.vertices[a].position, s.vertices[b].position) : kInf;
    }
  }

  std::vector<std::pair<int, int>> pairs;  // (task, class), 1-based
  for (int m = 0; m < spec.tasks; ++m) {
    for (int c = 0; c < classes[m]; ++c) pairs.emplace_back(m + 1, c + 1);
  }
  for (int u = 0; u < spec.devices; ++u) {
    Device d;
    d.id = u + 1;
    const double x = coord(rng);
    const double y = coord(rng);
    d.position = {x, y};
    s.devices.push_back(std::move(d));
  }
  std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
  for (int u = 0; u < spec.devices; ++u) {
    const auto& tc = u < total_classes ? pairs[static_cast<std::size_t>(u)] : pairs[pick(rng)];
    s.devices[u].task = tc.first;
    s.devices[u].cls = tc.second;
  }
  for (auto& d : s.devices) {
    d.gains.resize(J);
    for (std::size_t j = 0; j < J; ++j) {
      const double dist = distance(d.position, s.vertices[j].position);
      const auto draw = sample_channel(dist, s.config.rho0, s.config.d0_m, s.config.pathloss_exponent, rng);
      d.gains[j] = link_gain(draw.h, s.config.noise_w);
    }
  }

  const std::vector<std::string> defaults{"cifar10", "fashion_mnist"};
  for (int m = 0; m < spec.tasks; ++m) {
    const std::string name = spec.task_presets.empty()
                                 ? defaults[static_cast<std::size_t>(m) % defaults.size()]
                                 : spec.task_presets[static_cast<std::size_t>(m) % spec.task_presets.size()];
    auto model = preset_task_model(name, m + 1);
    if (!model) throw InvalidArgument("generate_scenario: unknown task preset '" + name + "'");
    s.tasks.push_back(TaskSpec{*model, classes[m]});
  }

  GenerationInfo info;
  info.area_side_m = spec.area_side_m;
  info.vertices = spec.vertices;
  info.devices = spec.devices;
  info.tasks = spec.tasks;
  info.classes_per_task = classes;
  info.noise_dbm = watt_to_dbm(spec.config.noise_w);
  s.generation = info;
  return s;
}

Violations validate_scenario(const Scenario& s) {
  Violations out;
  const auto& c = s.config;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      out.push_back({std::string("config.") + name + "_not_positive", std::string(name) + " must be finite and > 0"});
    }
  };
  positive(c.total_time_s, "T_all");
  positive(c.energy_budget_j, "E_all");
  positive(c.speed_mps, "v");
  positive(c.gamma1, "gamma1");
  positive(c.gamma2, "gamma2");
  positive(c.bandwidth_hz, "B");
  positive(c.bits_per_sample, "A");
  positive(c.noise_w, "sigma2");
  positive(c.pmax_w, "P_max");
  positive(c.rho0, "rho0");
  positive(c.d0_m, "d0");
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) {
    out.push_back({"config.epsilon_out_of_range", "epsilon must lie in (0, 1)"});
  }
  if (!(c.pathloss_exponent >= 2.0) || !std::isfinite(c.pathloss_exponent)) {
    out.push_back({"config.pathloss_exponent_out_of_range", "path-loss exponent must be >= 2"});
  }

  const std::size_t J = s.vertices.size();
  if (J == 0) out.push_back({"vertices.empty", "at least one vertex is required"});
  for (std::size_t j = 0; j < J; ++j) {
    if (s.vertices[j].id != static_cast<int>(j) + 1) {
      out.push_back({"vertices.ids_not_contiguous", "vertex ids must be 1..J in order"});
      break;
    }
  }
  if (s.distances.rows() != J || s.distances.cols() != J) {
    out.push_back({"distances.shape", "distances not J×J"});
  } else {
    for (std::size_t a = 0; a < J; ++a) {
      if (s.distances(a, a) != 0.0) out.push_back({"distances.diagonal_nonzero", "D(j,j) must be 0"});
      for (std::size_t b = 0; b < J; ++b) {
        const double d = s.distances(a, b);
        if (std::isnan(d) || d < 0.0) {
          out.push_back({"distances.negative", "distances must be >= 0 or +inf"});
        }
      }
    }
  }

  std::map<std::pair<int, int>, int> group_sizes;
  std::map<int, int> classes_of;
  for (const auto& t : s.tasks) {
    classes_of[t.model.m] = t.classes;
    for (auto& v : validate_task_model(t.model)) out.push_back(std::move(v));
    for (int cls = 1; cls <= t.classes; ++cls) group_sizes[{t.model.m, cls}] = 0;
  }
  for (std::size_t m = 0; m < s.tasks.size(); ++m) {
    if (s.tasks[m].model.m != static_cast<int>(m) + 1) {
      out.push_back({"tasks.ids_not_contiguous", "task indices must be 1..M in order"});
      break;
    }
  }
  if (s.tasks.empty()) out.push_back({"tasks.empty", "at least one task is required"});

  for (const auto& d : s.devices) {
    const std::string tag = "(u=" + std::to_string(d.id) + ")";
    if (d.gains.size() != J) out.push_back({"device.gains_length", "gain vector must have J entries " + tag});
    for (double g : d.gains) {
      if (!std::isfinite(g) || g < 0.0) {
        out.push_back({"device.gain_invalid", "gains must be finite and >= 0 " + tag});
        break;
      }
    }
    if (d.historical < 0) out.push_back({"device.historical_negative", "historical samples must be >= 0 " + tag});
    auto it = group_sizes.find({d.task, d.cls});
    if (it == group_sizes.end()) {
      out.push_back({"device.unknown_group", "device references an undeclared (task, class) " + tag});
    } else {
      ++it->second;
    }
  }
  for (const auto& [key, count] : group_sizes) {
    if (count == 0) {
      out.push_back({"group_empty" + group_tag(key.second, key.first),
                     "no device provides class " + std::to_string(key.second) + " of task " +
                         std::to_string(key.first)});
    }
  }
  return out;
}

std::vector<ClassGroup> class_groups(const Scenario& s) {
  std::vector<ClassGroup> out;
  for (const auto& t : s.tasks) {
    for (int c = 1; c <= t.classes; ++c) {
      ClassGroup g;
      g.task = t.model.m;
      g.cls = c;
      for (std::size_t u = 0; u < s.devices.size(); ++u) {
        if (s.devices[u].task == g.task && s.devices[u].cls == c) {
          g.devices.push_back(static_cast<int>(u));
          g.historical += static_cast<double>(s.devices[u].historical);
        }
      }
      out.push_back(std::move(g));
    }
  }
  return out;
}

std::vector<TaskModel> task_models(const Scenario& s) {
  std::vector<TaskModel> out;
  out.reserve(s.tasks.size());
  for (const auto& t : s.tasks) out.push_back(t.model);
  return out;
}

Scenario with_noise(const Scenario& s, double noise_w) {
  if (!(noise_w > 0.0)) throw InvalidArgument("with_noise: noise power must be > 0");
  Scenario out = s;
  const double scale = s.config.noise_w / noise_w;
  for (auto& d : out.devices) {
    for (double& g : d.gains) g *= scale;
  }
  out.config.noise_w = noise_w;
  if (out.generation) out.generation->noise_dbm = watt_to_dbm(noise_w);
  return out;
}

std::string scenario_to_string(const Scenario& s) { return encode(s).dump(2) + "\n"; }

Scenario scenario_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    return decode(j);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed scenario: ") + e.what());
  }
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << scenario_to_string(s);
  if (!out) throw Error("failed writing " + path);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_string(buf.str());
}

}  // namespace jpesp
