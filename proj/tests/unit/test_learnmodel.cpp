#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "jpesp/error.hpp"
#include "jpesp/learnmodel.hpp"

using namespace jpesp;

namespace {

const TaskModel kTask1{1, -3.742, -0.3957, 1.04};
const TaskModel kTask2{2, -0.9465, -0.3852, 0.955};

std::vector<FitPoint> synthetic(double t1, double t2, double t3) {
  std::vector<FitPoint> pts;
  for (int n = 50; n <= 2600; n += 50) pts.push_back({double(n), t1 * std::pow(double(n), t2) + t3});
  return pts;
}

}  // namespace

TEST_CASE("eval_fmeasure at the fitted coefficients") {
  CHECK(eval_fmeasure(kTask1, 2600) == doctest::Approx(0.8734).epsilon(1e-4));
  CHECK(eval_fmeasure(kTask2, 2600) == doctest::Approx(0.9092203).epsilon(1e-6));
  CHECK(eval_fmeasure({1, 0.0, -0.5, 0.5}, 17.0) == 0.5);
  CHECK(eval_fmeasure({1, 0.0, -0.5, 0.5}, 1e6) == 0.5);
  CHECK_THROWS_AS(eval_fmeasure(kTask1, 0.0), DomainError);
  CHECK_THROWS_AS(eval_fmeasure(kTask1, -1.0), DomainError);
}

TEST_CASE("eval_fmeasure_extended closes the model at zero samples") {
  CHECK(std::isinf(eval_fmeasure_extended(kTask1, 0.0)));
  CHECK(eval_fmeasure_extended(kTask1, 0.0) < 0);
  CHECK(eval_fmeasure_extended({1, 0.3, 0.5, 0.1}, 0.0) == 0.1);
  CHECK(eval_fmeasure_extended(kTask1, 2600) == eval_fmeasure(kTask1, 2600));
}

TEST_CASE("invert_fmeasure") {
  const double a = invert_fmeasure(kTask1, 0.8);
  CHECK(a == doctest::Approx(std::pow((0.8 - 1.04) / -3.742, 1.0 / -0.3957)).epsilon(1e-12));
  CHECK(a == doctest::Approx(1034.28).epsilon(1e-5));
  CHECK(eval_fmeasure(kTask1, a) == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(invert_fmeasure(kTask1, eval_fmeasure(kTask1, 500)) == doctest::Approx(500).epsilon(1e-10));

  bool thrown = false;
  try {
    invert_fmeasure(kTask1, 1.05);
  } catch (const RangeError& e) {
    thrown = true;
    CHECK(e.upper == doctest::Approx(1.04));
  }
  CHECK(thrown);
}

TEST_CASE("attainable range per branch") {
  auto [lo, hi] = attainable_range(kTask1);
  CHECK(std::isinf(lo));
  CHECK(hi == 1.04);
  auto [plo, phi] = attainable_range({1, 0.3, 0.5, 0.1});
  CHECK(plo == 0.1);
  CHECK(std::isinf(phi));
}

TEST_CASE("random models are increasing and invert to identity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> t1(-5.0, -0.01), t2(-1.5, -0.01), t3(0.5, 1.5), la(0.0, 9.0);
  for (int i = 0; i < 1000; ++i) {
    TaskModel m{1, t1(rng), t2(rng), t3(rng)};
    CHECK(validate_task_model(m).empty());
    CHECK(strictly_increasing(m));
    double a = std::exp(la(rng)), b = std::exp(la(rng));
    if (a > b) std::swap(a, b);
    if (b > a * (1 + 1e-9)) CHECK(eval_fmeasure(m, a) < eval_fmeasure(m, b));
    const double back = invert_fmeasure(m, eval_fmeasure(m, a));
    CHECK(back == doctest::Approx(a).epsilon(1e-8));
  }
}

TEST_CASE("validate_task_model codes") {
  auto has = [](const Violations& v, const std::string& code) {
    for (const auto& x : v) {
      if (x.code == code) return true;
    }
    return false;
  };
  CHECK(has(validate_task_model({1, -1.0, 0.0, 1.0}), "task.theta2_zero"));
  CHECK(has(validate_task_model({1, -1.0, 0.5, 1.0}), "task.sign_mismatch"));
  CHECK(has(validate_task_model({1, 1.0, 1.5, 0.0}), "task.theta2_out_of_range"));
  CHECK(validate_task_model(kTask1).empty());
}

TEST_CASE("report_fmeasure clamps for display") {
  CHECK(report_fmeasure(kTask1, 0.0) == 0.0);
  CHECK(report_fmeasure(kTask1, 1.0) == 0.0);
  CHECK(report_fmeasure({1, 0.3, 0.5, 0.1}, 1e6) == 1.0);
  CHECK(report_fmeasure(kTask1, 2600) == doctest::Approx(0.8734).epsilon(1e-4));
}

TEST_CASE("OA model") {
  CHECK(eval_oa(presets::kCifar10Oa, 2600) == doctest::Approx(0.8656949).epsilon(1e-6));
  CHECK(eval_oa(presets::kFashionMnistOa, 2600) == doctest::Approx(0.9200381).epsilon(1e-6));
  CHECK(eval_oa({0.0, -0.5, 0.9}, 123.0) == 0.9);
  CHECK_THROWS_AS(eval_oa(presets::kCifar10Oa, 0.0), DomainError);
}

TEST_CASE("confusion metrics") {
  auto p = confusion_metrics({100, 0, 0, 900});
  CHECK(p.precision == 1.0);
  CHECK(p.recall == 1.0);
  CHECK(p.fmeasure == 1.0);
  CHECK(p.oa == 1.0);

  auto c = confusion_metrics({90, 10, 30, 870});
  CHECK(c.precision == doctest::Approx(0.75));
  CHECK(c.recall == doctest::Approx(0.9));
  CHECK(c.fmeasure == doctest::Approx(0.8182).epsilon(1e-4));
  CHECK(c.oa == doctest::Approx(0.96));

  auto d = confusion_metrics({0, 10, 0, 990});
  CHECK(d.precision == 0.0);
  CHECK(d.precision_degenerate);
  CHECK(d.recall == 0.0);
  CHECK(d.fmeasure == 0.0);
  CHECK(d.oa == doctest::Approx(0.99));

  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long long> k(0, 50);
  for (int i = 0; i < 500; ++i) {
    auto m = confusion_metrics({k(rng), k(rng), k(rng), k(rng)});
    for (double v : {m.precision, m.recall, m.fmeasure, m.oa}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("fit recovers noiseless negative-branch data") {
  const auto pts = synthetic(-2.0, -0.4, 1.0);
  const auto f = fit_power_law(pts);
  CHECK(f.theta1 == doctest::Approx(-2.0).epsilon(1e-3));
  CHECK(f.theta2 == doctest::Approx(-0.4).epsilon(1e-3));
  CHECK(f.theta3 == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(f.rmse < 1e-6);
}

TEST_CASE("fit recovers noiseless positive-branch data") {
  const auto f = fit_power_law(synthetic(0.3, 0.5, 0.1));
  CHECK(f.theta1 == doctest::Approx(0.3).epsilon(1e-3));
  CHECK(f.theta2 == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(f.theta3 == doctest::Approx(0.1).epsilon(1e-3));
}

TEST_CASE("fit of flat data is constant") {
  std::vector<FitPoint> pts;
  for (int n = 100; n <= 1000; n += 100) pts.push_back({double(n), 0.7});
  const auto f = fit_power_law(pts);
  CHECK(std::abs(f.theta1) < 1e-6);
  CHECK(f.theta3 == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("fit with noise stays close to the true curve") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 0.01);
  auto pts = synthetic(-3.742, -0.3957, 1.04);
  for (auto& p : pts) p.value += noise(rng);
  const auto f = fit_power_law(pts);
  double sse = 0.0;
  for (const auto& p : pts) {
    const double truth = -3.742 * std::pow(p.n, -0.3957) + 1.04;
    const double fitted = f.theta1 * std::pow(p.n, f.theta2) + f.theta3;
    sse += (truth - fitted) * (truth - fitted);
  }
  CHECK(std::sqrt(sse / pts.size()) <= 0.02);
}

TEST_CASE("fit input errors") {
  std::vector<FitPoint> three{{1, 0.1}, {2, 0.2}, {3, 0.3}};
  CHECK_THROWS_AS(fit_power_law(three), InvalidArgument);
  std::vector<FitPoint> same{{5, 0.1}, {5, 0.2}, {5, 0.3}, {5, 0.4}};
  CHECK_THROWS_AS(fit_power_law(same), InvalidArgument);
}

TEST_CASE("read_fit_csv") {
  const std::string path = "fit_points.csv";
  {
    std::ofstream f(path);
    f << "n,value\n100,0.5\n200,0.6\n";
  }
  const auto pts = read_fit_csv(path);
  REQUIRE(pts.size() == 2);
  CHECK(pts[1].n == 200);
  CHECK(pts[1].value == 0.6);
  {
    std::ofstream f(path);
    f << "n,value\n100,0.5\nabc,0.6\n";
  }
  CHECK_THROWS_AS(read_fit_csv(path), ParseError);
}

TEST_CASE("presets") {
  auto m = preset_task_model("cifar10", 2);
  REQUIRE(m);
  CHECK(m->m == 2);
  CHECK(m->theta1 == -3.742);
  CHECK(preset_task_model("fashion_mnist_hist")->theta3 == 0.9456);
  CHECK(preset_task_model("cifar10_hist1700")->theta2 == -0.09712);
  CHECK_FALSE(preset_task_model("nope"));
  for (const auto& name : preset_names()) CHECK(validate_task_model(*preset_task_model(name)).empty());
}
