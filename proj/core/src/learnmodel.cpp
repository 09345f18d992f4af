#include "jpesp/learnmodel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/math/tools/minima.hpp>

namespace jpesp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct NamedPreset {
  std::string_view name;
  double theta1, theta2, theta3;
};

constexpr std::array kPresets{
    NamedPreset{"cifar10", -3.742, -0.3957, 1.04},
    NamedPreset{"fashion_mnist", -0.9465, -0.3852, 0.955},
    NamedPreset{"cifar10_hist", -3.167, -0.3208, 1.149},
    NamedPreset{"fashion_mnist_hist", -1.035, -0.4193, 0.9456},
    NamedPreset{"cifar10_hist1700", -1.961, -0.09712, 1.795},
    NamedPreset{"fashion_mnist_hist1700", -0.755, -0.08913, 1.302},
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double sse = kInf;
};

// Closed-form least squares of value ~ slope * n^exponent + intercept.
LinearFit fit_for_exponent(std::span<const FitPoint> pts, double exponent) {
  const auto k = static_cast<double>(pts.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : pts) {
    mx += std::pow(p.n, exponent);
    my += p.value;
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : pts) {
    const double dx = std::pow(p.n, exponent) - mx;
    sxx += dx * dx;
    sxy += dx * (p.value - my);
  }
  LinearFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (const auto& p : pts) {
    const double r = fit.slope * std::pow(p.n, exponent) + fit.intercept - p.value;
    sse += r * r;
  }
  fit.sse = sse;
  return fit;
}

struct BranchResult {
  double exponent = 0.0;
  LinearFit fit;
};

BranchResult search_branch(std::span<const FitPoint> pts, double lo, double hi) {
  constexpr int kGrid = 200;
  const double step = (hi - lo) / (kGrid - 1);
  int best = 0;
  double best_sse = kInf;
  for (int i = 0; i < kGrid; ++i) {
    const double sse = fit_for_exponent(pts, lo + step * i).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best = i;
    }
  }
  const double a = lo + step * std::max(best - 1, 0);
  const double b = lo + step * std::min(best + 1, kGrid - 1);
  auto objective = [&](double e) { return fit_for_exponent(pts, e).sse; };
  std::uintmax_t iters = 200;
  const auto [x, fx] = boost::math::tools::brent_find_minima(
      objective, a, b, std::numeric_limits<double>::digits / 2, iters);
  BranchResult out;
  const double grid_best = lo + step * best;
  out.exponent = fx <= best_sse ? x : grid_best;
  out.fit = fit_for_exponent(pts, out.exponent);
  return out;
}

}  // namespace

double eval_fmeasure(const TaskModel& model, double alpha) {
  if (!(alpha > 0.0)) {
    throw DomainError("eval_fmeasure: alpha must be > 0, got " + std::to_string(alpha));
  }
  return model.theta1 * std::pow(alpha, model.theta2) + model.theta3;
}

double eval_fmeasure_extended(const TaskModel& model, double alpha) {
  if (alpha > 0.0) return eval_fmeasure(model, alpha);
  if (alpha < 0.0 || std::isnan(alpha)) {
    throw DomainError("eval_fmeasure_extended: alpha must be >= 0");
  }
  if (model.theta1 == 0.0) return model.theta3;
  if (model.theta2 < 0.0) return model.theta1 > 0.0 ? kInf : -kInf;
  return model.theta3;
}

std::pair<double, double> attainable_range(const TaskModel& model) {
  if (model.theta1 == 0.0 || model.theta2 == 0.0) {
    const double v = model.theta1 + model.theta3;
    return {model.theta2 == 0.0 ? v : model.theta3, model.theta2 == 0.0 ? v : model.theta3};
  }
  // Limits at alpha -> 0+ and alpha -> inf.
  const double at_zero = model.theta2 > 0.0 ? model.theta3 : (model.theta1 > 0.0 ? kInf : -kInf);
  const double at_inf = model.theta2 < 0.0 ? model.theta3 : (model.theta1 > 0.0 ? kInf : -kInf);
  return {std::min(at_zero, at_inf), std::max(at_zero, at_inf)};
}

bool strictly_increasing(const TaskModel& model) {
  return model.theta1 * model.theta2 > 0.0;
}

double invert_fmeasure(const TaskModel& model, double target) {
  const auto [lo, hi] = attainable_range(model);
  if (!(target > lo && target < hi)) {
    std::ostringstream os;
    os << "invert_fmeasure: target " << target << " outside attainable range (" << lo << ", " << hi
       << ")";
    throw RangeError(os.str(), lo, hi);
  }
  return std::pow((target - model.theta3) / model.theta1, 1.0 / model.theta2);
}

Violations validate_task_model(const TaskModel& model) {
  Violations out;
  const std::string tag = "(m=" + std::to_string(model.m) + ")";
  if (model.theta2 == 0.0) {
    out.push_back({"task.theta2_zero", "theta2 must be nonzero " + tag});
  }
  if (model.theta1 != 0.0 && model.theta2 != 0.0 && (model.theta1 > 0.0) != (model.theta2 > 0.0)) {
    out.push_back({"task.sign_mismatch", "theta1 and theta2 must share a sign " + tag});
  }
  if (model.theta1 > 0.0 && !(model.theta2 > 0.0 && model.theta2 < 1.0)) {
    out.push_back({"task.theta2_out_of_range", "theta1 > 0 requires 0 < theta2 < 1 " + tag});
  }
  if (!strictly_increasing(model)) {
    out.push_back({"task.not_increasing", "model is not strictly increasing in alpha " + tag});
  }
  return out;
}

double report_fmeasure(const TaskModel& model, double alpha) {
  if (!(alpha > 0.0)) return 0.0;
  return std::clamp(eval_fmeasure(model, alpha), 0.0, 1.0);
}

double eval_oa(const OaModel& model, double n) {
  if (!(n > 0.0)) throw DomainError("eval_oa: n must be > 0");
  return model.zeta1 * std::pow(n, model.zeta2) + model.zeta3;
}

ConfusionMetrics confusion_metrics(const ConfusionCounts& c) {
  ConfusionMetrics m;
  const auto ratio = [](long long num, long long den, bool& degenerate) {
    if (den == 0) {
      degenerate = true;
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  m.precision = ratio(c.tp, c.tp + c.fp, m.precision_degenerate);
  m.recall = ratio(c.tp, c.tp + c.fn, m.recall_degenerate);
  if (m.precision + m.recall > 0.0) {
    m.fmeasure = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  } else {
    m.fmeasure_degenerate = true;
  }
  m.oa = ratio(c.tp + c.tn, c.tp + c.tn + c.fp + c.fn, m.oa_degenerate);
  return m;
}

PowerLawFit fit_power_law(std::span<const FitPoint> points) {
  if (points.size() < 4) {
    throw InvalidArgument("fit_power_law: too few points (need at least 4, got " +
                          std::to_string(points.size()) + ")");
  }
  for (const auto& p : points) {
    if (!(p.n > 0.0) || !std::isfinite(p.value)) {
      throw InvalidArgument("fit_power_law: sample sizes must be > 0 and values finite");
    }
  }
  const bool all_equal = std::all_of(points.begin(), points.end(),
                                     [&](const FitPoint& p) { return p.n == points.front().n; });
  if (all_equal) throw InvalidArgument("fit_power_law: degenerate points (all n equal)");

  const BranchResult neg = search_branch(points, -2.0, -1e-4);
  const BranchResult pos = search_branch(points, 1e-4, 1.0);
  const BranchResult& best = pos.fit.sse < neg.fit.sse ? pos : neg;

  PowerLawFit out;
  out.theta1 = best.fit.slope;
  out.theta2 = best.exponent;
  out.theta3 = best.fit.intercept;
  out.rmse = std::sqrt(best.fit.sse / static_cast<double>(points.size()));
  return out;
}

std::vector<FitPoint> read_fit_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file (expected header n,value)");
  std::vector<FitPoint> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected two columns n,value");
    }
    try {
      std::size_t used = 0;
      FitPoint p;
      p.n = std::stod(line.substr(0, comma), &used);
      p.value = std::stod(line.substr(comma + 1), &used);
      out.push_back(p);
    } catch (const std::logic_error&) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": non-numeric field");
    }
  }
  return out;
}

std::optional<TaskModel> preset_task_model(std::string_view name, int m) {
  for (const auto& p : kPresets) {
    if (p.name == name) return TaskModel{m, p.theta1, p.theta2, p.theta3};
  }
  return std::nullopt;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : kPresets) out.emplace_back(p.name);
  return out;
}

}  // namespace jpesp
