#include "jpesp/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "jpesp/report.hpp"
#include "jpesp/scenario.hpp"
#include "jpesp/search.hpp"

namespace jpesp::cli {

namespace {

struct GenOptions {
  GenerationSpec spec;
  double noise_dbm = -80.0;
  std::int64_t historical = 0;
  std::vector<std::string> model_files;
  double pmax_w = 0.0;
};

void add_gen_options(CLI::App& cmd, GenOptions& o) {
  auto& s = o.spec;
  cmd.add_option("--vertices", s.vertices, "Candidate stopping points J (vertex 1 is the start)")->capture_default_str();
  cmd.add_option("--devices", s.devices, "Number of IoT devices U")->capture_default_str();
  cmd.add_option("--tasks", s.tasks, "Number of learning tasks M")->capture_default_str();
  cmd.add_option("--classes", s.classes_per_task, "Classes per task (one value, or one per task)")
      ->capture_default_str();
  cmd.add_option("--area", s.area_side_m, "Side of the square area in metres")->capture_default_str();
  cmd.add_option("--seed", s.seed, "RNG seed")->capture_default_str();
  cmd.add_option("--noise-dbm", o.noise_dbm, "Noise power in dBm")->capture_default_str();
  cmd.add_option("--time", s.config.total_time_s, "Completion-time budget T_all in seconds")->capture_default_str();
  cmd.add_option("--energy", s.config.energy_budget_j, "Energy budget E_all in joules")->capture_default_str();
  cmd.add_option("--epsilon", s.config.epsilon, "Weight of vehicle energy in the budget")->capture_default_str();
  cmd.add_option("--speed", s.config.speed_mps, "Vehicle speed in m/s")->capture_default_str();
  cmd.add_option("--bandwidth", s.config.bandwidth_hz, "Bandwidth in Hz")->capture_default_str();
  cmd.add_option("--bits-per-sample", s.config.bits_per_sample, "Bits per training sample")->capture_default_str();
  cmd.add_option("--pmax", o.pmax_w, "Enable a device transmit-power cap in watts");
  cmd.add_option("--historical", o.historical, "Historical samples already held per device")->capture_default_str();
  cmd.add_option("--preset", s.task_presets, "Task model preset per task (" + [] {
    std::string names;
    for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
    return names;
  }() + ")");
  cmd.add_option("--model", o.model_files, "Task model JSON written by `fit`, one per task (overrides --preset)");
}

TaskModel read_model_file(const std::string& path, int m) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open model file " + path);
  try {
    const auto j = nlohmann::json::parse(in);
    return TaskModel{m, j.at("theta1").get<double>(), j.at("theta2").get<double>(), j.at("theta3").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Scenario build_scenario(const GenOptions& o, double noise_dbm, std::uint64_t seed) {
  GenerationSpec spec = o.spec;
  spec.seed = seed;
  spec.config.noise_w = dbm_to_watt(noise_dbm);
  if (o.pmax_w > 0.0) {
    spec.config.pmax_w = o.pmax_w;
    spec.config.pmax_enabled = true;
  }
  Scenario s = generate_scenario(spec);
  for (auto& d : s.devices) d.historical = o.historical;
  if (!o.model_files.empty()) {
    if (o.model_files.size() != s.tasks.size()) throw InvalidArgument("--model needs one file per task");
    for (std::size_t m = 0; m < s.tasks.size(); ++m) {
      s.tasks[m].model = read_model_file(o.model_files[m], s.tasks[m].model.m);
    }
  }
  return s;
}

void check_valid(const Scenario& s) {
  const auto v = validate_scenario(s);
  if (v.empty()) return;
  std::string msg = "invalid scenario:";
  for (const auto& x : v) msg += "\n  " + x.code + (x.detail.empty() ? "" : ": " + x.detail);
  throw InvalidArgument(msg);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + path);
  f << text;
  if (!f) throw InvalidArgument("failed writing " + path);
}

struct SearchOptions {
  TabuParams params;
  std::string tsp = "auto";
};

void add_search_options(CLI::App& cmd, SearchOptions& o) {
  auto& p = o.params;
  cmd.add_option("--iters", p.max_iter, "Tabu iterations")->capture_default_str();
  cmd.add_option("--samples", p.samples_per_iter, "Candidates drawn per iteration")->capture_default_str();
  cmd.add_option("--tabu-size", p.tabu_size, "Tabu list size L")->capture_default_str();
  cmd.add_option("--radius", p.radius, "Neighbourhood Hamming radius Z")->capture_default_str();
  cmd.add_option("--stall", p.stall_limit, "Stop after this many iterations without improvement (0: never)")
      ->capture_default_str();
  cmd.add_option("--tsp", o.tsp, "Tour solver: auto, exact or heuristic")
      ->check(CLI::IsMember({"auto", "exact", "heuristic"}))
      ->capture_default_str();
}

TspMode tsp_mode(const std::string& name) {
  if (name == "exact") return TspMode::Exact;
  if (name == "heuristic") return TspMode::Heuristic;
  return TspMode::Auto;
}

std::vector<Scheme> parse_schemes(const std::vector<std::string>& names) {
  if (names.empty()) throw InvalidArgument("scheme list is empty");
  std::vector<Scheme> out;
  for (const auto& n : names) out.push_back(parse_scheme(n));
  return out;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

int cmd_gen(const GenOptions& o, const std::string& out_path, std::ostream& out) {
  Scenario s = build_scenario(o, o.noise_dbm, o.spec.seed);
  check_valid(s);
  if (out_path.empty()) {
    out << scenario_to_string(s);
    return kOk;
  }
  write_file(out_path, scenario_to_string(s));
  out << "wrote " << out_path << ": J=" << s.vertex_count() << " U=" << s.device_count() << " M=" << s.tasks.size()
      << "\n";
  return kOk;
}

struct SolveOptions {
  std::string scenario;
  std::string out;
  std::vector<std::string> baselines{"fixed", "full_path", "throughput_fixed", "throughput_full"};
  bool timing = false;
  bool quiet = false;
};

int cmd_solve(const SolveOptions& o, SearchOptions search, std::ostream& out) {
  const Scenario s = load_scenario(o.scenario);
  check_valid(s);
  std::vector<Scheme> baselines;
  for (const auto& n : o.baselines) baselines.push_back(parse_scheme(n));
  search.params.tsp_mode = tsp_mode(search.tsp);
  const SolveReport report = tabu_solve(s, search.params, baselines);
  if (!o.out.empty()) write_file(o.out, report_to_json(report, s, {o.timing}).dump(2) + "\n");
  if (!o.quiet) {
    out << "best s = " << to_string(report.best_s) << ", objective = " << fmt(report.objective()) << "\n";
    out << format_summary(report);
    if (o.timing) out << "wall time " << fmt(report.wall_time_s) << " s\n";
  }
  return report.best.feasible() ? kOk : kInfeasible;
}

struct FitOptions {
  std::string csv;
  std::string out;
  int task = 1;
};

int cmd_fit(const FitOptions& o, std::ostream& out, std::ostream& err) {
  const auto points = read_fit_csv(o.csv);
  const PowerLawFit fit = fit_power_law(points);
  nlohmann::json j{{"m", o.task},
                   {"theta1", fit.theta1},
                   {"theta2", fit.theta2},
                   {"theta3", fit.theta3},
                   {"rmse", fit.rmse},
                   {"points", points.size()}};
  if (std::abs(fit.theta1) < 1e-9) err << "warning: the data show no trend in n; the fitted model is constant\n";
  const std::string text = j.dump(2) + "\n";
  if (o.out.empty()) {
    out << text;
  } else {
    write_file(o.out, text);
    out << "theta = (" << fmt(fit.theta1) << ", " << fmt(fit.theta2) << ", " << fmt(fit.theta3) << "), rmse "
        << fmt(fit.rmse) << "\n";
  }
  return kOk;
}

struct SweepOptions {
  double from = -110.0;
  double to = -80.0;
  double step = 10.0;
  std::vector<std::uint64_t> seeds{0};
  std::vector<std::string> schemes{"proposed", "fixed", "full_path", "throughput_fixed", "throughput_full"};
  std::string out;
  bool timing = false;
};

struct SweepRow {
  double objective = 0.0;
  std::vector<double> alpha;
  double tour_length_m = 0.0;
  double comm_time_s = 0.0;
  double comm_energy_j = 0.0;
  double wall_time_s = 0.0;
};

SweepRow run_cell(const Scenario& s, Scheme scheme, TabuParams params) {
  const auto started = std::chrono::steady_clock::now();
  SchemeResult r;
  if (scheme == Scheme::Proposed) {
    params.threads = 1;
    r = tabu_solve(s, params).best;
  } else {
    r = evaluate_baseline(s, scheme, params.tsp_mode);
  }
  SweepRow row;
  row.objective = r.objective;
  row.tour_length_m = r.route.length_m;
  if (r.allocation) {
    row.alpha = r.allocation->alpha;
    row.comm_time_s = r.allocation->comm_time_s;
    row.comm_energy_j = r.allocation->comm_energy_j;
  } else {
    row.alpha.assign(s.tasks.size(), 0.0);
  }
  row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return row;
}

int cmd_sweep(const GenOptions& gen, const SweepOptions& o, SearchOptions search, unsigned threads,
              std::ostream& out) {
  if (o.step == 0.0 || (o.to - o.from) * o.step < 0.0) throw InvalidArgument("--step must move from --from to --to");
  if (o.seeds.empty()) throw InvalidArgument("at least one seed is required");
  const auto schemes = parse_schemes(o.schemes);
  search.params.tsp_mode = tsp_mode(search.tsp);
  validate_params(search.params);

  std::vector<double> levels;
  const auto count = static_cast<long>(std::floor((o.to - o.from) / o.step + 1e-9));
  for (long i = 0; i <= count; ++i) levels.push_back(o.from + static_cast<double>(i) * o.step);

  struct Cell {
    double sigma_dbm;
    std::uint64_t seed;
    Scheme scheme;
  };
  std::vector<Cell> cells;
  for (double sigma : levels) {
    for (auto seed : o.seeds) {
      for (auto scheme : schemes) cells.push_back({sigma, seed, scheme});
    }
  }
  for (double sigma : levels) {
    for (auto seed : o.seeds) check_valid(build_scenario(gen, sigma, seed));
  }

  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(std::max(1u, threads));
  auto worker = [&](std::size_t w) {
    try {
      for (std::size_t i = next++; i < cells.size(); i = next++) {
        TabuParams p = search.params;
        p.seed = cells[i].seed;
        rows[i] = run_cell(build_scenario(gen, cells[i].sigma_dbm, cells[i].seed), cells[i].scheme, p);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < errors.size(); ++w) pool.emplace_back(worker, w);
  worker(0);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::string csv = "sigma_dbm,seed,scheme,objective";
  const std::size_t M = static_cast<std::size_t>(gen.spec.tasks);
  for (std::size_t m = 1; m <= M; ++m) csv += ",alpha_task" + std::to_string(m);
  csv += ",tour_length_m,comm_time_s,comm_energy_j,wall_time_s\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    const auto& r = rows[i];
    csv += fmt(c.sigma_dbm) + "," + std::to_string(c.seed) + "," + to_string(c.scheme) + "," + fmt(r.objective);
    for (double a : r.alpha) csv += "," + fmt(a);
    csv += "," + fmt(r.tour_length_m) + "," + fmt(r.comm_time_s) + "," + fmt(r.comm_energy_j) + "," +
           fmt(o.timing ? r.wall_time_s : 0.0) + "\n";
  }
  if (o.out.empty()) {
    out << csv;
  } else {
    write_file(o.out, csv);
    out << "wrote " << rows.size() << " rows to " << o.out << "\n";
  }
  return kOk;
}

}  // namespace

unsigned default_threads() {
  if (const char* env = std::getenv("JPESP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint path, energy and sample-size planning for edge learning"};
  app.name("jpesp");
  app.require_subcommand(1);
  unsigned threads = default_threads();
  app.add_option("--threads", threads, "Worker threads (default: JPESP_THREADS or 1)");

  GenOptions gen;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random scenario");
  add_gen_options(*gen_cmd, gen);
  gen_cmd->add_option("--out", gen_out, "Scenario file to write; stdout if omitted");

  SolveOptions solve;
  SearchOptions solve_search;
  auto* solve_cmd = app.add_subcommand("solve", "Plan the tour and transmissions for a scenario");
  solve_cmd->add_option("--scenario", solve.scenario, "Scenario file")->required();
  solve_cmd->add_option("--out", solve.out, "Report file (JSON)");
  solve_cmd->add_option("--seed", solve_search.params.seed, "Search seed")->capture_default_str();
  solve_cmd->add_option("--baselines", solve.baselines, "Baseline schemes to report")->capture_default_str();
  solve_cmd->add_flag("--timing", solve.timing, "Include wall-clock times");
  solve_cmd->add_flag("--quiet", solve.quiet, "Do not print the summary table");
  solve_cmd->add_option("--threads", threads, "Worker threads (default: JPESP_THREADS or 1)");
  add_search_options(*solve_cmd, solve_search);

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit an F-measure power-law model to n,value data");
  fit_cmd->add_option("--csv", fit.csv, "CSV with header and columns n,value")->required();
  fit_cmd->add_option("--out", fit.out, "Model file to write (JSON); stdout if omitted");
  fit_cmd->add_option("--task", fit.task, "Task index stored in the model")->capture_default_str();

  GenOptions sweep_gen;
  SweepOptions sweep;
  SearchOptions sweep_search;
  auto* sweep_cmd = app.add_subcommand("sweep", "Solve a grid of noise levels and seeds, writing CSV");
  add_gen_options(*sweep_cmd, sweep_gen);
  sweep_cmd->remove_option(sweep_cmd->get_option("--seed"));
  sweep_cmd->remove_option(sweep_cmd->get_option("--noise-dbm"));
  sweep_cmd->add_option("--from", sweep.from, "First noise level in dBm")->capture_default_str();
  sweep_cmd->add_option("--to", sweep.to, "Last noise level in dBm")->capture_default_str();
  sweep_cmd->add_option("--step", sweep.step, "Noise step in dB")->capture_default_str();
  sweep_cmd->add_option("--seeds", sweep.seeds, "Scenario seeds")->capture_default_str();
  sweep_cmd->add_option("--schemes", sweep.schemes, "Schemes to run")->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "CSV file to write; stdout if omitted");
  sweep_cmd->add_flag("--timing", sweep.timing, "Fill in wall_time_s");
  sweep_cmd->add_option("--threads", threads, "Worker threads (default: JPESP_THREADS or 1)");
  add_search_options(*sweep_cmd, sweep_search);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }
  if (threads == 0) threads = 1;

  try {
    if (*gen_cmd) return cmd_gen(gen, gen_out, out);
    if (*solve_cmd) {
      solve_search.params.threads = threads;
      return cmd_solve(solve, solve_search, out);
    }
    if (*fit_cmd) return cmd_fit(fit, out, err);
    if (*sweep_cmd) return cmd_sweep(sweep_gen, sweep, sweep_search, threads, out);
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << "\n";
    return kNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumeric;
  }
  return kInvalidInput;
}

}  // namespace jpesp::cli
