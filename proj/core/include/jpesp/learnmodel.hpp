#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jpesp/error.hpp"

namespace jpesp {

/// F-measure model of one learning task: Phi(alpha) = theta1 * alpha^theta2 + theta3,
/// where alpha is the sample count of the task's minority class.
struct TaskModel {
  int m = 1;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;

  bool operator==(const TaskModel&) const = default;
};

/// Overall-accuracy model Xi(n) = zeta1 * n^zeta2 + zeta3.
struct OaModel {
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  double zeta3 = 0.0;
};

/// Evaluates the F-measure model. Unclamped; throws DomainError for alpha <= 0.
double eval_fmeasure(const TaskModel& model, double alpha);

/// Value of the model at alpha, extended to alpha == 0 by its limit
/// (-inf on the decreasing-power branch, theta3 otherwise).
double eval_fmeasure_extended(const TaskModel& model, double alpha);

/// Open interval of values the model takes over alpha > 0.
std::pair<double, double> attainable_range(const TaskModel& model);

/// alpha with eval_fmeasure(model, alpha) == target. Throws RangeError when
/// target lies outside attainable_range(model).
double invert_fmeasure(const TaskModel& model, double target);

/// True when theta1 and theta2 share a sign, so Phi is strictly increasing.
bool strictly_increasing(const TaskModel& model);

/// Invariant check; codes are `task.theta2_zero`, `task.sign_mismatch`,
/// `task.theta2_out_of_range` and `task.not_increasing`.
Violations validate_task_model(const TaskModel& model);

/// Display value: clamps to [0, 1] and maps alpha == 0 to 0.
double report_fmeasure(const TaskModel& model, double alpha);

double eval_oa(const OaModel& model, double n);

struct ConfusionCounts {
  long long tp = 0;
  long long fn = 0;
  long long fp = 0;
  long long tn = 0;
};

/// Precision, recall, F-measure and overall accuracy of a confusion matrix.
/// Any 0/0 is reported as 0 with the matching `*_degenerate` flag set.
struct ConfusionMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double fmeasure = 0.0;
  double oa = 0.0;
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool fmeasure_degenerate = false;
  bool oa_degenerate = false;
};

ConfusionMetrics confusion_metrics(const ConfusionCounts& counts);

struct FitPoint {
  double n = 0.0;
  double value = 0.0;
};

struct PowerLawFit {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
  double rmse = 0.0;
};

/// Least-squares fit of value ~ theta1 * n^theta2 + theta3.
///
/// The exponent is searched on the two branches [-2, -1e-4] and [1e-4, 1]:
/// a 200-point scan brackets the best exponent, a Brent/golden-section line
/// search refines it, and (theta1, theta3) come from the closed-form linear
/// least-squares solution for that exponent. The branch with the smaller
/// RMSE wins. Requires at least 4 points with n > 0, not all equal.
PowerLawFit fit_power_law(std::span<const FitPoint> points);

/// Parses a two-column `n,value` CSV with a header row.
std::vector<FitPoint> read_fit_csv(const std::string& path);

/// Coefficients fitted to the reference CNN experiments, by name:
/// `cifar10`, `fashion_mnist` (full sweep), `cifar10_hist`,
/// `fashion_mnist_hist` (historical window up to 1700 samples),
/// `cifar10_hist1700`, `fashion_mnist_hist1700` (1700 historical samples,
/// wider bandwidth setup).
std::optional<TaskModel> preset_task_model(std::string_view name, int m = 1);
std::vector<std::string> preset_names();

namespace presets {
inline constexpr OaModel kCifar10Oa{-1.64, -0.1803, 1.263};
inline constexpr OaModel kFashionMnistOa{-0.5914, -0.1927, 1.05};
}  // namespace presets

}  // namespace jpesp
