#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"

namespace fdeflow {
namespace {

using test::constant;
using test::sampled;

TEST(EvalF, ConstantDelay) {
  const Problem p = make_problem("linear_const_delay(-1,1)", 1e-3);
  EXPECT_EQ(eval_f(p.f, *constant(1.0))[0], -1.0);
}

TEST(EvalF, ZeroLag) {
  const Problem p = make_problem("linear_ode(1)", 1e-3);
  EXPECT_DOUBLE_EQ(eval_f(p.f, *sampled([](double s) { return std::exp(s); }))[0], 1.0);
}

TEST(EvalF, StateDependentDelay) {
  const Problem p = make_problem("state_dep_delay(-1,1,4)", 1e-3);
  EXPECT_DOUBLE_EQ(eval_f(p.f, *constant(0.5))[0], -0.5);
  const auto ramp = sampled([](double s) { return 0.5 + s; });
  // delay 0.25: -phi(-0.25) = -0.25
  EXPECT_NEAR(eval_f(p.f, *ramp)[0], -0.25, 1e-14);
}

TEST(EvalF, DomainExitAndNonFinite) {
  const Problem p = make_problem("state_dep_delay(-1,1,4)", 1e-3);
  EXPECT_FALSE(in_domain(p.f, *constant(3.0)));
  EXPECT_THROW(eval_f(p.f, *constant(3.0)), DomainError);
  const auto bad = test::scalar_rhs([](const History&) { return NAN; });
  EXPECT_THROW(eval_f(bad, *constant(1.0)), DomainError);
}

TEST(EvalDf, LinearMapIsItsOwnDerivative) {
  const Problem p = make_problem("linear_const_delay(-1,1)", 1e-3);
  const auto chi = sampled([](double s) { return std::sin(3 * s); });
  for (double c : {0.0, 1.0, -7.0}) {
    EXPECT_NEAR(eval_df(p.f, *constant(c), *chi)[0], -chi->evaluate(-1.0)[0], 1e-15);
  }
  EXPECT_EQ(eval_df(p.f, *constant(1.0), *constant(0.0))[0], 0.0);
}

TEST(EvalDf, Quadratic) {
  const Problem p = make_problem("quadratic", 1e-3);
  EXPECT_DOUBLE_EQ(eval_df(p.f, *constant(3.0), *constant(1.0))[0], 6.0);
}

TEST(EvalDf, FallsBackToFiniteDifferences) {
  auto f = test::scalar_rhs([](const History& phi) {
    const double x = phi.evaluate(0.0)[0];
    return x * x * x;
  });
  EXPECT_NEAR(eval_df(f, *constant(2.0), *constant(1.0))[0], 12.0, 1e-7);
}

TEST(EvalDf, LinearInDirection) {
  const auto phi = sampled([](double s) { return 0.8 + 0.1 * std::sin(s); });
  const auto c1 = sampled([](double s) { return std::cos(s); });
  const auto c2 = sampled([](double s) { return s; });
  const double a = 2.0, b = -0.5;
  const LinearCombination comb({{a, c1}, {b, c2}});
  for (const char* name : {"linear_const_delay", "quadratic", "linear_ode", "state_dep_delay"}) {
    const Problem p = make_problem(name, 1e-3);
    const double tol = p.f.dir_deriv ? 1e-12 : 1e-6;
    const double lhs = eval_df(p.f, *phi, comb)[0];
    const double rhs = a * eval_df(p.f, *phi, *c1)[0] + b * eval_df(p.f, *phi, *c2)[0];
    EXPECT_NEAR(lhs, rhs, tol) << name;
  }
}

// Histories that agree on [-d, 0] but differ further back give the same value.
TEST(Rhs, LocallyBoundedDelay) {
  for (const ProblemInfo& info : registry()) {
    if (info.kind != ProblemKind::Autonomous) continue;
    const Problem p = make_problem(info.name, 1e-3);
    const double d = p.f.delay_horizon;
    const double cut = -1.5 * d;
    const auto a = sampled([](double s) { return 0.5 + 0.2 * std::sin(s); }, 3 * d, 1e-3);
    const auto b = sampled(
        [cut](double s) { return 0.5 + 0.2 * std::sin(s) + std::max(0.0, cut - s); }, 3 * d,
        1e-3);
    ASSERT_NE(a->evaluate(-2 * d)[0], b->evaluate(-2 * d)[0]);
    EXPECT_EQ(eval_f(p.f, *a)[0], eval_f(p.f, *b)[0]) << info.name;
  }
}

}  // namespace
}  // namespace fdeflow
