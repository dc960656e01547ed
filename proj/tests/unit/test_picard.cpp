#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"

namespace fdeflow {
namespace {

using test::config;
using test::constant;
using test::uniform_nodes;

ForwardPath path_of(const std::function<double(double)>& fn, double T, double h = 1e-3) {
  return ForwardPath::sample([fn](double t) { return scalar_vec(fn(t)); }, uniform_nodes(T, h),
                             true);
}

double sup_diff(const ForwardPath& p, const std::function<double(double)>& fn) {
  double e = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    e = std::max(e, std::abs(p.value(i)[0] - fn(p.nodes()[i])));
  }
  return e;
}

StepSpec grid_step_of(double S, double dt = 1e-3) {
  return StepSpec{S, static_cast<int>(std::lround(S / dt)), true};
}

TEST(Substitute, Examples) {
  const auto nodes = uniform_nodes(1.0, 1e-2);
  const Problem c = make_problem("constant(2)", 1e-3);
  const auto x = prolong_const(constant(5.0), 1.0);
  EXPECT_EQ(sup_diff(substitute(c.f, x), [](double) { return 2.0; }), 0.0);

  const Problem ode = make_problem("linear_ode(1)", 1e-3);
  std::vector<Vec> ev;
  for (double t : nodes) ev.push_back(scalar_vec(std::exp(t)));
  const Trajectory xi(test::sampled([](double s) { return std::exp(s); }), nodes, ev);
  EXPECT_LT(sup_diff(substitute(ode.f, xi), [](double t) { return std::exp(t); }), 1e-15);

  const Problem lcd = make_problem("linear_const_delay", 1e-3);
  const auto one = prolong_const(constant(1.0), 1.0);
  EXPECT_EQ(sup_diff(substitute(lcd.f, one), [](double) { return -1.0; }), 0.0);
}

TEST(Substitute, ReportsFirstDomainExit) {
  const Problem p = make_problem("state_dep_delay(-1,1,4)", 1e-3);
  const auto nodes = uniform_nodes(1.0, 0.1);
  std::vector<Vec> v;
  for (double t : nodes) v.push_back(scalar_vec(1.0 + 2.0 * t));
  const Trajectory xi(constant(1.0), nodes, v);
  try {
    substitute(p.f, xi);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NEAR(e.time(), 0.6, 1e-12);  // (1 + 2t)^2 > 4 first at t = 0.6
  }
}

TEST(IntegratePath, Examples) {
  const auto zero = ForwardPath::zero(1, uniform_nodes(1.0, 1e-3));
  EXPECT_EQ(integrate_path(zero).sup_norm(), 0.0);
  const auto ones = ForwardPath::sample([](double) { return scalar_vec(1.0); },
                                        uniform_nodes(1.0, 1e-3));
  EXPECT_LT(sup_diff(integrate_path(ones), [](double t) { return t; }), 1e-15);
  const auto lin = ForwardPath::sample([](double t) { return scalar_vec(t); },
                                       uniform_nodes(1.0, 1e-3));
  for (auto kind : {QuadratureKind::Trapezoid, QuadratureKind::Simpson}) {
    const auto out = integrate_path(lin, kind);
    EXPECT_TRUE(out.zero_at_origin());
    EXPECT_LT(sup_diff(out, [](double t) { return t * t / 2; }), 1e-15);
  }
  const auto sq = ForwardPath::sample([](double t) { return scalar_vec(t * t); },
                                      uniform_nodes(1.0, 1e-3));
  EXPECT_LT(sup_diff(integrate_path(sq, QuadratureKind::Simpson),
                     [](double t) { return t * t * t / 3; }),
            1e-15);
  const double trap = sup_diff(integrate_path(sq), [](double t) { return t * t * t / 3; });
  EXPECT_GT(trap, 1e-9);
  EXPECT_LT(trap, 1e-6);
}

TEST(PicardMap, ConstantIntegrand) {
  const Problem c = make_problem("constant(3)", 1e-3);
  const auto eta = path_of([](double t) { return std::sin(t); }, 0.5);
  EXPECT_LT(sup_diff(picard_map(c.f, eta, constant(1.0)), [](double t) { return 3 * t; }), 1e-13);
}

TEST(PicardMap, IteratesOfExponential) {
  const Problem ode = make_problem("linear_ode(1)", 1e-3);
  const auto phi = constant(1.0);
  const auto k = QuadratureKind::Simpson;
  const auto e1 = picard_map(ode.f, ForwardPath::zero(1, uniform_nodes(0.5, 1e-3)), phi, k);
  EXPECT_LT(sup_diff(e1, [](double t) { return t; }), 1e-15);
  const auto e2 = picard_map(ode.f, e1, phi, k);
  EXPECT_LT(sup_diff(e2, [](double t) { return t + t * t / 2; }), 1e-15);
  const auto e3 = picard_map(ode.f, e2, phi, k);
  EXPECT_LT(sup_diff(e3, [](double t) { return t + t * t / 2 + t * t * t / 6; }), 1e-15);
}

TEST(PicardMap, DelayedConstantHistory) {
  const Problem lcd = make_problem("linear_const_delay", 1e-3);
  const auto out = picard_map(lcd.f, ForwardPath::zero(1, uniform_nodes(1.0, 1e-3)),
                              constant(1.0));
  EXPECT_LT(sup_diff(out, [](double t) { return -t; }), 1e-15);
}

TEST(PlanStep, LinearDelayHasLipschitzOne) {
  const Problem lcd = make_problem("linear_const_delay", 1e-3);
  const StepPlan plan = plan_step(lcd.f, *constant(1.0), config());
  EXPECT_NEAR(plan.df_norm_at_phi, 1.0, 1e-6);
  EXPECT_LE(plan.S(), 0.5);
  EXPECT_LE(plan.contraction_bound, 0.5);
  EXPECT_LT(plan.smallness, plan.eps / 8);
  EXPECT_TRUE(plan.step.on_grid);
  EXPECT_NEAR(plan.S(), plan.step.panels * 1e-3, 1e-12);
}

TEST(PlanStep, ConstantRhsIsLimitedBySmallness) {
  const Problem c = make_problem("constant(1)", 1e-3);
  const StepPlan plan = plan_step(c.f, *constant(0.0), config());
  EXPECT_EQ(plan.lipschitz_est, 0.0);
  EXPECT_LT(plan.S() * 1.0, plan.eps / 8);
  EXPECT_GE(plan.S(), plan.eps / 32);  // no more halving than the smallness test needs
}

TEST(PlanStep, QuadraticAtTen) {
  const Problem q = make_problem("quadratic", 1e-3);
  const StepPlan plan = plan_step(q.f, *constant(10.0), config());
  EXPECT_NEAR(plan.df_norm_at_phi, 20.0, 0.5);
  EXPECT_LE(plan.S(), 1.0 / 40);
  EXPECT_LE(plan.contraction_bound, 0.5);
}

TEST(PlanStep, RespectsRemainingTime) {
  const Problem lcd = make_problem("linear_const_delay", 1e-3);
  PlanContext ctx;
  ctx.remaining = 0.0123;
  const StepPlan plan = plan_step(lcd.f, *constant(1.0), config(), ctx);
  EXPECT_DOUBLE_EQ(plan.S(), 0.0123);
  ctx.remaining = 1e-3 / 3;
  const StepPlan tiny = plan_step(lcd.f, *constant(1.0), config(), ctx);
  EXPECT_EQ(tiny.step.panels, 1);
  EXPECT_FALSE(tiny.step.on_grid);
}

TEST(PlanStep, FailsBelowMinimumStep) {
  const Problem q = make_problem("quadratic", 1e-3);
  SolverConfig cfg = config();
  cfg.s_min = 0.01;
  EXPECT_THROW(plan_step(q.f, *constant(1e3), cfg), StepSelectionError);
}

TEST(SolveLocal, MethodOfStepsOnFirstLag) {
  const Problem lcd = make_problem("linear_const_delay", 1e-3);
  const LocalSolution sol = solve_local(lcd.f, constant(1.0), grid_step_of(0.5), config());
  for (std::size_t i = 0; i < sol.x.size(); ++i) {
    EXPECT_NEAR(sol.x.value(i)[0], 1.0 - sol.x.nodes()[i], 1e-14);
  }
}

TEST(SolveLocal, ZeroRhsConvergesImmediately) {
  const Problem c = make_problem("constant(0)", 1e-3);
  const LocalSolution sol = solve_local(c.f, constant(2.0), grid_step_of(0.3), config());
  EXPECT_EQ(sol.report.iterations, 1);
  EXPECT_EQ(sol.report.residual, 0.0);
  for (std::size_t i = 0; i < sol.x.size(); ++i) EXPECT_EQ(sol.x.value(i)[0], 2.0);
}

TEST(SolveLocal, ExponentialWithSimpson) {
  const Problem ode = make_problem("linear_ode(1)", 1e-3);
  SolverConfig cfg = config();
  cfg.quadrature = QuadratureKind::Simpson;
  const LocalSolution sol = solve_local(ode.f, constant(1.0), grid_step_of(0.5), cfg);
  for (std::size_t i = 0; i < sol.x.size(); ++i) {
    EXPECT_NEAR(sol.x.value(i)[0], std::exp(sol.x.nodes()[i]), 1e-8);
  }
}

TEST(SolveLocal, NonconvergenceIsReported) {
  const Problem ode = make_problem("linear_ode(1)", 1e-3);
  SolverConfig cfg = config();
  cfg.tol.max_iters = 3;
  EXPECT_THROW(solve_local(ode.f, constant(1.0), grid_step_of(0.5), cfg), NonconvergenceError);
}

TEST(SolveLocal, FixedPointConsistency) {
  const Problem q = make_problem("quadratic", 1e-3);
  const auto phi = constant(1.0);
  const SolverConfig cfg = config();
  const StepPlan plan = plan_step(q.f, *phi, cfg);
  const LocalSolution sol = solve_local(q.f, phi, plan.step, cfg);
  const ForwardPath eta = picard_map(q.f, [&] {
    std::vector<Vec> v;
    for (std::size_t i = 0; i < sol.x.size(); ++i) v.push_back(sol.x.value(i) - phi->evaluate(0));
    return ForwardPath(std::vector<double>(sol.x.nodes().begin(), sol.x.nodes().end()), v, true);
  }(), phi);
  double r = 0.0;
  for (std::size_t i = 0; i < sol.x.size(); ++i) {
    r = std::max(r, std::abs(sol.x.value(i)[0] - 1.0 - eta.value(i)[0]));
  }
  EXPECT_LE(r, 2 * cfg.tol.threshold(sol.x.value(sol.x.size() - 1)[0] + 1.0));
}

class Contraction : public ::testing::TestWithParam<const char*> {};

TEST_P(Contraction, AcceptedPlansContract) {
  const Problem p = make_problem(GetParam(), 1e-3);
  const SolverConfig cfg = config();
  for (double c : {0.5, 1.0, 1.5}) {
    const auto phi = test::sampled([c](double s) { return c + 0.3 * std::sin(2 * s); });
    const StepPlan plan = plan_step(p.f, *phi, cfg);
    const double ratio = measure_contraction(p.f, phi, plan.step, plan.eps, cfg, 20, 7);
    EXPECT_LE(ratio, plan.contraction_bound + 0.1) << "c = " << c;
    const LocalSolution sol = solve_local(p.f, phi, plan.step, cfg);
    for (double r : sol.report.ratios) EXPECT_LE(r, plan.contraction_bound + 0.1);
  }
}

INSTANTIATE_TEST_SUITE_P(Registry, Contraction,
                         ::testing::Values("linear_const_delay(-1,0.25)", "quadratic",
                                           "linear_ode(2)", "state_dep_delay"));

TEST(Smallness, ShrinksWithStep) {
  const Problem q = make_problem("quadratic", 1e-3);
  double prev = INFINITY;
  for (double S : {0.2, 0.1, 0.05, 0.025}) {
    const auto b0 =
        picard_map(q.f, ForwardPath::zero(1, uniform_nodes(S, 1e-3)), constant(1.0)).sup_norm();
    EXPECT_LT(b0, prev);
    prev = b0;
  }
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  c.grid_step = 0.0;
  EXPECT_THROW(c.validate(), InvariantError);
  c = SolverConfig{};
  c.safety = 0.5;
  EXPECT_THROW(c.validate(), InvariantError);
  EXPECT_NO_THROW(SolverConfig{}.validate());
}

}  // namespace
}  // namespace fdeflow
