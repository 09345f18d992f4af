#include "jpesp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jpesp/scenario.hpp"

namespace jpesp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> selected_indices(const Selection& s) {
  std::vector<int> idx;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j]) idx.push_back(static_cast<int>(j));
  }
  return idx;
}

// Prefer the lexicographically smaller orientation when both have the same
// length, so symmetric instances have a unique answer.
std::vector<int> canonical_orientation(std::vector<int> cycle, const Matrix<double>& d) {
  std::vector<int> rev(cycle.rbegin(), cycle.rend());
  if (rev < cycle && cycle_length(rev, d) == cycle_length(cycle, d)) return rev;
  return cycle;
}

std::vector<int> held_karp(const std::vector<int>& idx, const Matrix<double>& d) {
  const std::size_t k = idx.size() - 1;
  const std::size_t full = (std::size_t{1} << k) - 1;
  std::vector<double> cost((full + 1) * k, kInf);
  std::vector<std::int8_t> parent((full + 1) * k, -1);
  auto at = [k](std::size_t mask, std::size_t i) { return mask * k + i; };
  auto dist = [&](std::size_t a, std::size_t b) {
    return d(static_cast<std::size_t>(idx[a]), static_cast<std::size_t>(idx[b]));
  };

  for (std::size_t i = 0; i < k; ++i) cost[at(std::size_t{1} << i, i)] = dist(0, i + 1);
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t last = 0; last < k; ++last) {
      if (!(mask & (std::size_t{1} << last))) continue;
      const double base = cost[at(mask, last)];
      if (base == kInf) continue;
      for (std::size_t next = 0; next < k; ++next) {
        if (mask & (std::size_t{1} << next)) continue;
        const std::size_t nmask = mask | (std::size_t{1} << next);
        const double c = base + dist(last + 1, next + 1);
        if (c < cost[at(nmask, next)]) {
          cost[at(nmask, next)] = c;
          parent[at(nmask, next)] = static_cast<std::int8_t>(last);
        }
      }
    }
  }

  double best = kInf;
  std::size_t best_last = 0;
  for (std::size_t last = 0; last < k; ++last) {
    const double c = cost[at(full, last)] + dist(last + 1, 0);
    if (c < best) {
      best = c;
      best_last = last;
    }
  }
  if (best == kInf) throw InfeasibleError("solve_tsp: selected vertices cannot be joined by finite edges");

  std::vector<int> rev_path;
  std::size_t mask = full;
  auto cur = static_cast<std::int8_t>(best_last);
  while (cur >= 0) {
    rev_path.push_back(idx[static_cast<std::size_t>(cur) + 1]);
    const std::int8_t prev = parent[at(mask, static_cast<std::size_t>(cur))];
    mask &= ~(std::size_t{1} << static_cast<std::size_t>(cur));
    cur = prev;
  }
  std::vector<int> cycle{0};
  cycle.insert(cycle.end(), rev_path.rbegin(), rev_path.rend());
  cycle.push_back(0);
  return cycle;
}

std::vector<int> nearest_neighbour_two_opt(const std::vector<int>& idx, const Matrix<double>& d) {
  std::vector<int> tour{0};
  std::vector<int> remaining(idx.begin() + 1, idx.end());
  while (!remaining.empty()) {
    const auto cur = static_cast<std::size_t>(tour.back());
    auto best = remaining.begin();
    for (auto it = remaining.begin(); it != remaining.end(); ++it) {
      if (d(cur, static_cast<std::size_t>(*it)) < d(cur, static_cast<std::size_t>(*best))) best = it;
    }
    tour.push_back(*best);
    remaining.erase(best);
  }
  tour.push_back(0);

  // First-improvement 2-opt in fixed index order. Lengths are recomputed in
  // full so asymmetric distances are handled correctly.
  double current = cycle_length(tour, d);
  const std::size_t last = tour.size() - 2;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 1; i < last && !improved; ++i) {
      for (std::size_t j = i + 1; j <= last && !improved; ++j) {
        std::reverse(tour.begin() + static_cast<std::ptrdiff_t>(i), tour.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        const double len = cycle_length(tour, d);
        if (len < current - 1e-12) {
          current = len;
          improved = true;
        } else {
          std::reverse(tour.begin() + static_cast<std::ptrdiff_t>(i),
                       tour.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        }
      }
    }
  }
  if (current == kInf) throw InfeasibleError("solve_tsp: heuristic found no finite tour");
  return tour;
}

}  // namespace

Selection stay_put(std::size_t vertices) {
  Selection s(vertices, 0);
  if (!s.empty()) s[0] = 1;
  return s;
}

Selection all_vertices(std::size_t vertices) { return Selection(vertices, 1); }

std::size_t selected_count(const Selection& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](auto v) { return v != 0; }));
}

std::string to_string(const Selection& s) {
  std::string out;
  out.reserve(s.size());
  for (auto v : s) out.push_back(v ? '1' : '0');
  return out;
}

Violations validate_route(const Selection& s, const EdgeMatrix& e, const Matrix<double>& d) {
  Violations out;
  const std::size_t J = s.size();
  if (J == 0 || e.rows() != J || e.cols() != J || d.rows() != J || d.cols() != J) {
    out.push_back({"shape_mismatch", "s, E and D must agree on J"});
    return out;
  }
  const bool binary = std::all_of(s.begin(), s.end(), [](auto v) { return v <= 1; }) &&
                      std::all_of(e.data().begin(), e.data().end(), [](auto v) { return v <= 1; });
  if (!binary) out.push_back({"not_binary", "s and E must be 0/1"});
  if (s[0] != 1) out.push_back({"start_not_selected", "s_1 must be 1"});
  for (std::size_t j = 0; j < J; ++j) {
    if (e(j, j)) out.push_back({"self_loop", "E(" + std::to_string(j + 1) + "," + std::to_string(j + 1) + ") = 1"});
  }
  if (!out.empty()) return out;

  const std::size_t count = selected_count(s);
  if (count == 1) {
    if (std::any_of(e.data().begin(), e.data().end(), [](auto v) { return v != 0; })) {
      out.push_back({"stay_put_has_edges", "only the start is selected but E is nonzero"});
    }
    return out;
  }

  for (std::size_t j = 0; j < J; ++j) {
    int in = 0, outdeg = 0;
    for (std::size_t i = 0; i < J; ++i) {
      outdeg += e(j, i);
      in += e(i, j);
    }
    if (in != s[j] || outdeg != s[j]) {
      out.push_back({"degree_mismatch", "vertex " + std::to_string(j + 1) + ": in=" + std::to_string(in) +
                                            " out=" + std::to_string(outdeg) + " s=" + std::to_string(s[j])});
    }
  }
  if (!out.empty()) return out;

  std::size_t visited = 0;
  std::size_t cur = 0;
  do {
    std::size_t next = 0;
    while (next < J && !e(cur, next)) ++next;
    cur = next;
    ++visited;
  } while (cur != 0 && visited <= J);
  if (visited != count) {
    out.push_back({"not_single_cycle", "tour from vertex 1 covers " + std::to_string(visited) + " of " +
                                           std::to_string(count) + " selected vertices"});
  }
  return out;
}

double tour_length(const EdgeMatrix& e, const Matrix<double>& d) {
  if (e.rows() != d.rows() || e.cols() != d.cols()) throw InvalidArgument("tour_length: shape mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < e.rows(); ++i) {
    for (std::size_t j = 0; j < e.cols(); ++j) {
      if (!e(i, j)) continue;
      if (std::isinf(d(i, j))) {
        throw InfeasibleError("tour uses missing edge " + std::to_string(i + 1) + "->" + std::to_string(j + 1));
      }
      total += d(i, j);
    }
  }
  return total;
}

double motion_energy(double length_m, double speed_mps, double gamma1, double gamma2) {
  if (!(speed_mps > 0.0)) throw InvalidArgument("motion_energy: speed must be > 0");
  return length_m * (gamma1 / speed_mps + gamma2);
}

double motion_time(double length_m, double speed_mps) {
  if (!(speed_mps > 0.0)) throw InvalidArgument("motion_time: speed must be > 0");
  return length_m / speed_mps;
}

double cycle_length(const std::vector<int>& cycle, const Matrix<double>& d) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cycle.size(); ++i) {
    total += d(static_cast<std::size_t>(cycle[i]), static_cast<std::size_t>(cycle[i + 1]));
  }
  return total;
}

EdgeMatrix edges_of_cycle(const std::vector<int>& cycle, std::size_t vertices) {
  EdgeMatrix e(vertices, vertices, 0);
  for (std::size_t i = 0; i + 1 < cycle.size(); ++i) {
    e.at(static_cast<std::size_t>(cycle[i]), static_cast<std::size_t>(cycle[i + 1])) = 1;
  }
  return e;
}

std::vector<int> cycle_of(const EdgeMatrix& e) {
  if (!e.square() || e.rows() == 0) throw InvalidArgument("cycle_of: E must be square and non-empty");
  const std::size_t J = e.rows();
  std::vector<int> cycle{0};
  std::vector<bool> seen(J, false);
  seen[0] = true;
  std::size_t cur = 0;
  while (true) {
    std::size_t next = J;
    for (std::size_t j = 0; j < J; ++j) {
      if (e(cur, j)) {
        if (next != J) throw InvalidArgument("cycle_of: vertex has several successors");
        next = j;
      }
    }
    if (next == J) {
      if (cur == 0) return cycle;  // stay-put plan
      throw InvalidArgument("cycle_of: tour does not return to the start");
    }
    cycle.push_back(static_cast<int>(next));
    if (next == 0) break;
    if (seen[next]) throw InvalidArgument("cycle_of: tour revisits a vertex");
    seen[next] = true;
    cur = next;
  }
  std::size_t edges = 0;
  for (auto v : e.data()) edges += v;
  if (edges != cycle.size() - 1) throw InvalidArgument("cycle_of: E is not a single cycle");
  return cycle;
}

TspResult solve_tsp(const Selection& s, const Matrix<double>& d, TspMode mode) {
  const std::size_t J = s.size();
  if (J == 0 || s[0] != 1) throw InvalidArgument("solve_tsp: the start vertex must be selected");
  if (d.rows() != J || d.cols() != J) throw InvalidArgument("solve_tsp: distances not J x J");

  const auto idx = selected_indices(s);
  TspResult out;
  if (idx.size() == 1) {
    out.edges = EdgeMatrix(J, J, 0);
    return out;
  }
  const bool exact = mode == TspMode::Exact || (mode == TspMode::Auto && idx.size() <= kExactTspLimit);
  if (exact && idx.size() > kExactTspHardLimit) throw InvalidArgument("solve_tsp: too many vertices for the exact solver");
  auto cycle = exact ? held_karp(idx, d) : nearest_neighbour_two_opt(idx, d);
  cycle = canonical_orientation(std::move(cycle), d);
  out.edges = edges_of_cycle(cycle, J);
  out.length_m = cycle_length(cycle, d);
  out.certified_optimal = exact;
  return out;
}

RoutePlan plan_route(const Selection& s, const Matrix<double>& d, const PlanningConfig& config, TspMode mode) {
  auto tsp = solve_tsp(s, d, mode);
  RoutePlan r;
  r.s = s;
  r.cycle = cycle_of(tsp.edges);
  r.edges = std::move(tsp.edges);
  r.length_m = tsp.length_m;
  r.motion_time_s = motion_time(r.length_m, config.speed_mps);
  r.motion_energy_j = motion_energy(r.length_m, config.speed_mps, config.gamma1, config.gamma2);
  r.certified_optimal = tsp.certified_optimal;
  return r;
}

}  // namespace jpesp
