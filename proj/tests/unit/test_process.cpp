#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"

namespace fdeflow {
namespace {

using test::config;
using test::constant;

RhsNonautonomous scalar_g(std::function<double(double, const History&)> fn) {
  RhsNonautonomous g;
  g.name = "g";
  g.dim = 1;
  g.eval = [fn](double t, const History& phi) { return scalar_vec(fn(t, phi)); };
  return g;
}

HistoryPtr stacked(double t0, HistoryPtr phi) {
  return std::make_shared<StackedHistory>(std::make_shared<ClockHistory>(t0), std::move(phi));
}

TEST(Augment, TimeAsRightHandSide) {
  const RhsAutonomous f = augment(scalar_g([](double t, const History&) { return t; }));
  EXPECT_EQ(f.dim, 2);
  const Vec v = eval_f(f, *stacked(1.25, constant(3.0)));
  EXPECT_EQ(v[0], 1.0);
  EXPECT_EQ(v[1], 1.25);
}

TEST(Augment, ZeroRightHandSide) {
  const RhsAutonomous f = augment(scalar_g([](double, const History&) { return 0.0; }));
  const Vec v = eval_f(f, *stacked(-4.0, constant(3.0)));
  EXPECT_EQ(v[0], 1.0);
  EXPECT_EQ(v[1], 0.0);
}

TEST(Augment, PantographReadsTheProportionalDelay) {
  const Problem p = make_problem("pantograph(-1,0,0.5)", 1e-3);
  const RhsAutonomous f = augment(p.g);
  // at clock 2 with lambda = 0.5 the delayed argument is s = -1: -phi(-1) = 1
  const Vec v = eval_f(f, *stacked(2.0, parse_history("linear:0,1", 1)));
  EXPECT_EQ(v[0], 1.0);
  EXPECT_NEAR(v[1], 1.0, 1e-15);
}

TEST(Augment, DerivativeCarriesTheClockDirection) {
  const Problem p = make_problem("drift(2)", 1e-3);
  const RhsAutonomous f = augment(p.g);
  const Vec d = eval_df(f, *stacked(0.0, constant(1.0)), *stacked(0.0, constant(1.0)));
  EXPECT_EQ(d[0], 0.0);
  EXPECT_NEAR(d[1], 0.0, 1e-9);
}

TEST(Process, IdentityAtInitialTime) {
  const Problem p = make_problem("pantograph", 1e-3);
  const auto phi = test::sampled([](double s) { return 1 + s * s; });
  const ProcessRun pr = process(p.g, 0.4, 0.4, phi, config());
  EXPECT_TRUE(pr.ok());
  for (double s = -2.0; s <= 0.0; s += 0.01) {
    EXPECT_EQ(pr.state->evaluate(s)[0], phi->evaluate(s)[0]);
  }
}

TEST(Process, PureDrift) {
  const Problem p = make_problem("drift(1)", 1e-3);
  const ProcessRun pr = process(p.g, 1.7, 0.5, constant(2.0), config());
  ASSERT_TRUE(pr.ok());
  EXPECT_NEAR(pr.state->evaluate(0.0)[0], 3.2, 1e-13);
  EXPECT_NEAR(pr.clock_time(), 1.7, 1e-15);
}

TEST(Process, RejectsBackwardTime) {
  const Problem p = make_problem("drift(1)", 1e-3);
  EXPECT_THROW(process(p.g, 0.0, 1.0, constant(0.0), config()), InvariantError);
}

// Hand-written stepper for x' = a x(lambda t) + b x(t): Heun on a uniform grid,
// x(lambda t) by linear interpolation of the computed values.
std::vector<double> pantograph_heun(double a, double b, double lambda, double T, double h) {
  const int n = static_cast<int>(std::lround(T / h));
  std::vector<double> x(n + 1);
  x[0] = 1.0;
  auto at = [&](double t, int known) {
    const double r = t / h;
    const int i = std::min(static_cast<int>(r), known - 1);
    if (known == 0) return x[0];
    const double th = r - i;
    return (1 - th) * x[i] + th * x[i + 1];
  };
  for (int k = 0; k < n; ++k) {
    const double t = k * h;
    const double f0 = a * at(lambda * t, k) + b * x[k];
    const double pred = x[k] + h * f0;
    x[k + 1] = pred;  // lambda (t + h) < t + h, so the predictor is only read near the end
    const double f1 = a * at(lambda * (t + h), k + 1) + b * pred;
    x[k + 1] = x[k] + 0.5 * h * (f0 + f1);
  }
  return x;
}

TEST(Process, AgreesWithHandWrittenPantographStepper) {
  const double h = 1e-3;
  const auto ref = pantograph_heun(-1.0, 0.5, 0.5, 2.0, h);
  const Problem p = make_problem("pantograph(-1,0.5,0.5)", h);
  const ProcessRun pr = process(p.g, 2.0, 0.0, constant(1.0), config(h));
  ASSERT_TRUE(pr.ok());
  const Trajectory x = pr.path();
  double d = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    d = std::max(d, std::abs(x.evaluate(k * h)[0] - ref[k]));
  }
  EXPECT_LE(d, 1e-5);
}

TEST(Process, PantographSeries) {
  std::vector<double> c(26);
  c[0] = 1.0;
  for (int k = 0; k < 25; ++k) c[k + 1] = -std::pow(0.5, k) * c[k] / (k + 1);
  const Problem p = make_problem("pantograph(-1,0,0.5)", 1e-3);
  const ProcessRun pr = process(p.g, 2.0, 0.0, constant(1.0), config());
  ASSERT_TRUE(pr.ok());
  const Trajectory x = pr.path();
  for (double t = 0.0; t <= 2.0; t += 0.05) {
    double s = 0.0;
    for (int k = 25; k >= 0; --k) s = s * t + c[k];
    EXPECT_NEAR(x.evaluate(t)[0], s, 1e-6) << t;
  }
}

TEST(Cocycle, TrivialInnerLeg) {
  const Problem p = make_problem("pantograph", 1e-3);
  EXPECT_LE(check_cocycle(p.g, 1.0, 0.0, 0.0, constant(1.0), SeminormIndex(2), config()), 1e-15);
}

TEST(Cocycle, ConstantProcess) {
  const Problem p = make_problem("drift(0)", 1e-3);
  const auto phi = test::sampled([](double s) { return std::cos(s); });
  EXPECT_LE(check_cocycle(p.g, 1.0, 0.3, 0.0, phi, SeminormIndex(1), config()), 1e-15);
}

TEST(Cocycle, Pantograph) {
  const Problem p = make_problem("pantograph", 1e-3);
  EXPECT_LE(check_cocycle(p.g, 1.0, 0.5, 0.0, constant(1.0), SeminormIndex(2), config()), 1e-5);
}

TEST(Clock, ExactToRoundOff) {
  const Problem p = make_problem("pantograph", 1e-3);
  for (double t0 : {0.0, 0.3, -0.7}) {
    const ProcessRun pr = process(p.g, t0 + 1.5, t0, constant(1.0), config());
    ASSERT_TRUE(pr.ok());
    EXPECT_LE(clock_defect(pr), 1e-12) << t0;
  }
}

TEST(Process, PathDropsTheClock) {
  const Problem p = make_problem("drift(1)", 1e-3);
  const ProcessRun pr = process(p.g, 1.0, 0.0, constant(0.0), config());
  const Trajectory x = pr.path();
  EXPECT_EQ(x.dim(), 1);
  EXPECT_NEAR(x.evaluate(0.6)[0], 0.6, 1e-13);
}

}  // namespace
}  // namespace fdeflow
