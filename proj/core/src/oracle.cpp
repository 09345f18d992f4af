#include "jpesp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jpesp::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (n+1) x (n+1) table indexed by time steps and energy steps.
using Table = Matrix<double>;

Table convolve(const Table& x, const Table& y) {
  const std::size_t N = x.rows();
  Table z(N, N, -kInf);
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t a1 = 0; a1 <= a; ++a1) {
      const double* xr = &x(a1, 0);
      const double* yr = &y(a - a1, 0);
      double* zr = &z(a, 0);
      for (std::size_t b = 0; b < N; ++b) {
        double best = zr[b];
        for (std::size_t b1 = 0; b1 <= b; ++b1) best = std::max(best, xr[b1] + yr[b - b1]);
        zr[b] = best;
      }
    }
  }
  return z;
}

struct Cell {
  std::size_t a = 0;
  std::size_t b = 0;
};

}  // namespace

BruteTour tsp_brute_force(const Selection& s, const Matrix<double>& D) {
  if (s.empty() || !s[0]) throw InvalidArgument("tsp_brute_force: start vertex must be selected");
  if (D.rows() != s.size() || D.cols() != s.size()) throw InvalidArgument("tsp_brute_force: D is not J x J");
  std::vector<int> rest;
  for (std::size_t j = 1; j < s.size(); ++j) {
    if (s[j]) rest.push_back(static_cast<int>(j));
  }
  if (rest.size() + 1 > kBruteForceTspLimit) throw RefusedError("tsp_brute_force: too many selected vertices");

  BruteTour out{EdgeMatrix(s.size(), s.size(), 0), 0.0};
  if (rest.empty()) return out;

  std::vector<int> best_order;
  double best = kInf;
  do {
    double len = D(0, static_cast<std::size_t>(rest.front()));
    for (std::size_t i = 0; i + 1 < rest.size(); ++i) {
      len += D(static_cast<std::size_t>(rest[i]), static_cast<std::size_t>(rest[i + 1]));
    }
    len += D(static_cast<std::size_t>(rest.back()), 0);
    if (len < best) {
      best = len;
      best_order = rest;
    }
  } while (std::next_permutation(rest.begin(), rest.end()));

  out.length_m = best;
  if (best_order.empty()) return out;
  int prev = 0;
  for (int v : best_order) {
    out.edges(static_cast<std::size_t>(prev), static_cast<std::size_t>(v)) = 1;
    prev = v;
  }
  out.edges(static_cast<std::size_t>(prev), 0) = 1;
  return out;
}

BestSelection enumerate_best_s(const Scenario& scenario, std::size_t j_cap, TspMode mode) {
  const std::size_t J = scenario.vertex_count();
  if (J == 0) throw InvalidArgument("enumerate_best_s: scenario has no vertices");
  if (J > j_cap) throw RefusedError("enumerate_best_s: too many vertices to enumerate");
  std::optional<BestSelection> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (J - 1)); ++mask) {
    Selection s(J, 0);
    s[0] = 1;
    for (std::size_t j = 1; j < J; ++j) s[j] = static_cast<std::uint8_t>((mask >> (j - 1)) & 1);
    OmegaResult r = omega(scenario, s, mode);
    if (!best || r.value > best->result.value || (r.value == best->result.value && s < best->s)) {
      best = BestSelection{std::move(s), std::move(r)};
    }
  }
  return std::move(*best);
}

GridOptimum grid_inner_oracle(const Scenario& scenario, const Selection& s, const EdgeMatrix& edges,
                              std::size_t grid_n) {
  const std::size_t J = scenario.vertex_count();
  const std::size_t U = scenario.device_count();
  if (s.size() != J || !s[0]) throw InvalidArgument("grid_inner_oracle: bad selection");
  if (edges.rows() != J || edges.cols() != J) throw InvalidArgument("grid_inner_oracle: edges not J x J");
  if (U == 0) throw InvalidArgument("grid_inner_oracle: no devices");
  if (U > kGridMaxDevices) throw RefusedError("grid_inner_oracle: too many devices");
  std::vector<std::size_t> selected;
  for (std::size_t j = 0; j < J; ++j) {
    if (s[j]) selected.push_back(j);
  }
  if (selected.size() > kGridMaxVertices) throw RefusedError("grid_inner_oracle: too many selected vertices");
  if (grid_n == 0 || grid_n > kGridMaxSteps) throw RefusedError("grid_inner_oracle: grid size out of range");

  const auto& c = scenario.config;
  double length = 0.0;
  for (std::size_t i = 0; i < J; ++i) {
    for (std::size_t j = 0; j < J; ++j) {
      if (edges(i, j)) length += scenario.distances(i, j);
    }
  }
  const double T = c.total_time_s - length / c.speed_mps;
  const double E = c.energy_budget_j - c.epsilon * length * (c.gamma1 / c.speed_mps + c.gamma2);

  GridOptimum out;
  out.time_s = Matrix<double>(U, J, 0.0);
  out.power_w = Matrix<double>(U, J, 0.0);
  out.value = -kInf;
  if (!(T > 0.0) || !(E > 0.0)) return out;

  const std::size_t n = grid_n;
  const std::size_t N = n + 1;
  const double dt = T / static_cast<double>(n);
  const double de = E / static_cast<double>(n);
  out.time_step_s = dt;
  out.energy_step_j = de;

  struct DeviceTables {
    std::vector<std::size_t> order;  // selected vertices, strongest first
    std::vector<Table> raw;          // samples at exactly (a, b)
    std::vector<Table> capped;       // best with at most (a, b)
    std::vector<Table> chain;        // chain[k] combines vertices order[0..k]
  };
  std::vector<DeviceTables> dev(U);
  for (std::size_t u = 0; u < U; ++u) {
    const auto& gains = scenario.devices[u].gains;
    auto& d = dev[u];
    d.order = selected;
    std::stable_sort(d.order.begin(), d.order.end(), [&](std::size_t x, std::size_t y) { return gains[x] > gains[y]; });
    for (std::size_t j : d.order) {
      Table raw(N, N, 0.0);
      for (std::size_t a = 1; a < N; ++a) {
        const double t = static_cast<double>(a) * dt;
        for (std::size_t b = 0; b < N; ++b) {
          const double p = static_cast<double>(b) * de / t;
          if (c.pmax_enabled && p > c.pmax_w) {
            raw(a, b) = -kInf;
            continue;
          }
          raw(a, b) = c.bandwidth_hz / c.bits_per_sample * t * std::log2(1.0 + p * gains[j]);
        }
      }
      Table capped = raw;
      for (std::size_t a = 0; a < N; ++a) {
        for (std::size_t b = 0; b < N; ++b) {
          if (a > 0) capped(a, b) = std::max(capped(a, b), capped(a - 1, b));
          if (b > 0) capped(a, b) = std::max(capped(a, b), capped(a, b - 1));
        }
      }
      d.chain.push_back(d.chain.empty() ? capped : convolve(d.chain.back(), capped));
      d.raw.push_back(std::move(raw));
      d.capped.push_back(std::move(capped));
    }
  }

  const auto groups = class_groups(scenario);
  const auto models = task_models(scenario);
  auto objective = [&](const std::vector<double>& samples) {
    std::vector<double> alpha(models.size(), kInf);
    for (const auto& g : groups) {
      double y = g.historical;
      for (int u : g.devices) y += samples[static_cast<std::size_t>(u)];
      auto& am = alpha[static_cast<std::size_t>(g.task - 1)];
      am = std::min(am, y);
    }
    double v = kInf;
    for (std::size_t m = 0; m < models.size(); ++m) {
      v = std::min(v, eval_fmeasure_extended(models[m], std::isinf(alpha[m]) ? 0.0 : alpha[m]));
    }
    return v;
  };

  std::vector<Cell> share(U);
  std::vector<double> samples(U, 0.0);
  if (U == 1) {
    share[0] = {n, n};
    samples[0] = dev[0].chain.back()(n, n);
    out.value = objective(samples);
  } else {
    for (std::size_t a = 0; a < N; ++a) {
      for (std::size_t b = 0; b < N; ++b) {
        samples[0] = dev[0].chain.back()(a, b);
        samples[1] = dev[1].chain.back()(n - a, n - b);
        const double v = objective(samples);
        if (v > out.value) {
          out.value = v;
          share[0] = {a, b};
          share[1] = {n - a, n - b};
        }
      }
    }
  }

  // Recover which vertex received which share, favouring the strongest vertex.
  for (std::size_t u = 0; u < U; ++u) {
    auto& d = dev[u];
    Cell cell = share[u];
    for (std::size_t k = d.order.size(); k-- > 0;) {
      Cell own = cell;
      Cell before{0, 0};
      if (k > 0) {
        double best = -kInf;
        for (std::size_t a1 = cell.a + 1; a1-- > 0;) {
          for (std::size_t b1 = cell.b + 1; b1-- > 0;) {
            const double v = d.chain[k - 1](a1, b1) + d.capped[k](cell.a - a1, cell.b - b1);
            if (v > best) {
              best = v;
              before = {a1, b1};
            }
          }
        }
        own = {cell.a - before.a, cell.b - before.b};
      }
      // Smallest exact cell that attains the capped value.
      const double target = d.capped[k](own.a, own.b);
      Cell used{0, 0};
      bool found = false;
      for (std::size_t a = 0; a <= own.a && !found; ++a) {
        for (std::size_t b = 0; b <= own.b && !found; ++b) {
          if (d.raw[k](a, b) == target) {
            used = {a, b};
            found = true;
          }
        }
      }
      if (used.a > 0) {
        const std::size_t j = d.order[k];
        out.time_s(u, j) = static_cast<double>(used.a) * dt;
        out.power_w(u, j) = static_cast<double>(used.b) * de / out.time_s(u, j);
      }
      cell = before;
    }
  }
  return out;
}

}  // namespace jpesp::oracle
