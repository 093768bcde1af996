#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "mprk/errors.hpp"
#include "mprk/operators.hpp"
#include "mprk/stepper.hpp"
#include "mprk/tableau.hpp"
#include "tests/support/dense.hpp"
#include "tests/support/dense_step.hpp"

using namespace mprk;

namespace {

std::vector<double> random_vector(std::mt19937& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

double inf_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> dense_k(const ProblemSpec& p) {
  return oracle::dense_kron_sum(
      oracle::dense_stencil_1d(p.k_op.stencil, static_cast<std::size_t>(p.n)),
      static_cast<std::size_t>(p.n), p.k_op.sigma, p.k_op.gamma);
}

// Two stages, one low-precision off-diagonal coupling, no implicit solve.
ButcherTableau explicit_eps_tableau() {
  ButcherTableau t;
  t.q = 2;
  t.name = "eps-coupled explicit";
  t.a_high.assign(2, std::vector<double>(2, 0.0));
  t.a_eps.assign(2, std::vector<double>(2, 0.0));
  t.a_eps[1][0] = 0.5;
  t.b = {0.0, 1.0};
  t.c = {0.0, 0.5};
  return t;
}

}  // namespace

TEST_CASE("one step matches the dense stage-by-stage reference on the heat problem") {
  std::mt19937 rng(91901);
  const auto p = make_problem(Equation::Heat, 3);
  const auto kd = dense_k(p);
  const double tau = 0.01;

  std::vector<ButcherTableau> tableaus = {
      builtin_tableau(Method::M4s3pA), builtin_tableau(Method::M4s3pB),
      builtin_tableau(Method::M4s3pC), midpoint_corrected(1)};
  for (const auto& t : tableaus) {
    IntegrationConfig cfg;
    cfg.tableau = t;
    cfg.tau = tau;
    cfg.tol = 1e-13;
    Stepper stepper(p, cfg);

    std::vector<double> u = random_vector(rng, p.size(), 0.0, 1.0);
    const auto want = oracle::dense_step(t, kd, p.size(), p.forcing, u, tau);
    StepTrace trace;
    stepper.step(u, trace);
    CHECK_FALSE(trace.solver_failure);
    CHECK(inf_diff(u, want) <= 1e-10 * std::max(1.0, inf_norm(want)));
  }
}

TEST_CASE("one step matches the dense reference on the advection problem") {
  std::mt19937 rng(91902);
  const auto p = make_problem(Equation::Advection, 4);
  const auto kd = dense_k(p);
  const std::vector<double> no_forcing;
  const double tau = 1.0 / 640.0;

  for (const auto& t : {builtin_tableau(Method::M4s3pC), midpoint_corrected(2)}) {
    IntegrationConfig cfg;
    cfg.tableau = t;
    cfg.tau = tau;
    cfg.tol = 1e-13;
    Stepper stepper(p, cfg);

    std::vector<double> u = p.initial_state;
    const auto want = oracle::dense_step(t, kd, p.size(), no_forcing, u, tau);
    StepTrace trace;
    stepper.step(u, trace);
    CHECK_FALSE(trace.solver_failure);
    CHECK(inf_diff(u, want) <= 1e-10 * std::max(1.0, inf_norm(want)));
  }
}

TEST_CASE("solve counts per step follow the tableau structure") {
  const auto p = make_problem(Equation::Heat, 4);
  auto solves_per_step = [&](const ButcherTableau& t) {
    IntegrationConfig cfg;
    cfg.tableau = t;
    cfg.tau = 0.01;
    Stepper stepper(p, cfg);
    std::vector<double> u = p.initial_state;
    StepTrace trace;
    stepper.step(u, trace);
    return trace.solves.size();
  };
  CHECK(solves_per_step(builtin_tableau(Method::M4s3pA)) == 2);
  CHECK(solves_per_step(builtin_tableau(Method::M4s3pB)) == 4);
  CHECK(solves_per_step(builtin_tableau(Method::M4s3pC)) == 4);
  CHECK(solves_per_step(midpoint_corrected(0)) == 1);
  CHECK(solves_per_step(midpoint_corrected(5)) == 1);
  CHECK(solves_per_step(explicit_eps_tableau()) == 0);
}

TEST_CASE("the F64 policy never touches binary32 arithmetic") {
  const auto p = make_problem(Equation::Heat, 4);
  IntegrationConfig cfg;
  cfg.tableau = builtin_tableau(Method::M4s3pB);
  cfg.tau = 0.025;
  cfg.t_end = 0.1;
  reset_kron_apply_counts();
  integrate(p, cfg);
  CHECK(kron_apply_count(Precision::F32) == 0);
  CHECK(kron_apply_count(Precision::F64) > 0);
}

TEST_CASE("the F32 policy runs the implicit solves and eps evaluations in binary32") {
  const auto p = make_problem(Equation::Heat, 4);
  IntegrationConfig cfg;
  cfg.tableau = builtin_tableau(Method::M4s3pB);
  cfg.tau = 0.025;
  cfg.t_end = 0.1;
  cfg.tol = 1e-3;
  cfg.policy.implicit = Precision::F32;
  reset_kron_apply_counts();
  integrate(p, cfg);
  CHECK(kron_apply_count(Precision::F32) > 0);
  CHECK(kron_apply_count(Precision::F64) > 0);
}

TEST_CASE("a purely explicit eps coupling costs exactly one binary32 stencil per step") {
  const auto p = make_problem(Equation::Advection, 4);
  IntegrationConfig cfg;
  cfg.tableau = explicit_eps_tableau();
  cfg.tau = 1.0 / 640.0;
  cfg.t_end = 8.0 / 640.0;
  cfg.policy.implicit = Precision::F32;
  reset_kron_apply_counts();
  const auto res = integrate(p, cfg);
  CHECK(res.steps == 8);
  CHECK(kron_apply_count(Precision::F32) == 8);

  cfg.policy.implicit = Precision::F64;
  reset_kron_apply_counts();
  integrate(p, cfg);
  CHECK(kron_apply_count(Precision::F32) == 0);
}

TEST_CASE("more corrector passes diverge once the step is beyond the contraction range") {
  const auto p = make_problem(Equation::Heat, 8);
  IntegrationConfig cfg;
  cfg.tau = 0.01;
  cfg.t_end = 0.05;
  cfg.tol = 1e-12;

  cfg.tableau = midpoint_corrected(1);
  const auto mild = integrate(p, cfg);
  cfg.tableau = midpoint_corrected(12);
  const auto wild = integrate(p, cfg);
  REQUIRE(mild.error_max.has_value());
  REQUIRE(wild.error_max.has_value());
  CHECK(*wild.error_max > *mild.error_max);
}

TEST_CASE("advection steps preserve the state sum") {
  const auto p = make_problem(Equation::Advection, 8);
  IntegrationConfig cfg;
  cfg.tableau = builtin_tableau(Method::M4s3pC);
  cfg.tau = 1.0 / 640.0;
  cfg.tol = 1e-13;
  Stepper stepper(p, cfg);

  std::vector<double> u = p.initial_state;
  const double s0 = std::accumulate(u.begin(), u.end(), 0.0);
  StepTrace trace;
  for (int s = 0; s < 8; ++s) {
    stepper.step(u, trace);
    const double sk = std::accumulate(u.begin(), u.end(), 0.0);
    CHECK(std::abs(sk - s0) <= 1e-8 * (s + 1));
  }
}

TEST_CASE("a step size far beyond the stability boundary blows up detectably") {
  const auto p = make_problem(Equation::Heat, 16);
  IntegrationConfig cfg;
  cfg.tableau = builtin_tableau(Method::M4s3pA);
  cfg.tau = 10.0;
  cfg.t_end = 3000.0;
  CHECK_THROWS_AS(integrate(p, cfg), NonFiniteState);
}

TEST_CASE("integration bookkeeping: steps, iteration stats and timings") {
  const auto p = make_problem(Equation::Heat, 6);
  IntegrationConfig cfg;
  cfg.tableau = builtin_tableau(Method::M4s3pB);
  cfg.tau = 0.025;
  cfg.t_end = 0.1;
  const auto res = integrate(p, cfg);

  CHECK(res.steps == 4);
  CHECK(res.solve_iterations.size() == 16);
  long long total = 0;
  for (int it : res.solve_iterations) {
    total += it;
    CHECK(it <= cfg.max_iter);
  }
  CHECK(total == res.total_iterations);
  CHECK(res.mean_iterations ==
        static_cast<double>(total) / static_cast<double>(res.solve_iterations.size()));
  CHECK_FALSE(res.solver_failure);
  CHECK(res.wall_seconds > 0.0);
  REQUIRE(res.error_max.has_value());
  REQUIRE(res.error_l2.has_value());
  CHECK(*res.error_l2 <= *res.error_max * (1.0 + 1e-12));
  for (const char* label : {"solver", "precond", "stencil", "axpy"})
    CHECK(res.timings.entries().count(label) == 1);
}

TEST_CASE("advection reports errors only against a supplied reference") {
  const auto p = make_problem(Equation::Advection, 6);
  IntegrationConfig cfg;
  cfg.tableau = midpoint_corrected(1);
  cfg.tau = 1.0 / 640.0;
  cfg.t_end = 4.0 / 640.0;
  const auto bare = integrate(p, cfg);
  CHECK_FALSE(bare.error_max.has_value());

  const auto with_ref = integrate(p, cfg, &p.initial_state);
  REQUIRE(with_ref.error_max.has_value());
  CHECK(*with_ref.error_max > 0.0);

  std::vector<double> bad(3, 0.0);
  CHECK_THROWS_AS(integrate(p, cfg, &bad), LengthMismatch);
}

TEST_CASE("step-size validation") {
  const auto p = make_problem(Equation::Heat, 4);
  IntegrationConfig cfg;
  cfg.tableau = midpoint_corrected(1);
  cfg.t_end = 0.1;
  cfg.tau = 0.03;
  CHECK_THROWS_AS(integrate(p, cfg), Error);
  cfg.tau = -0.01;
  CHECK_THROWS_AS(integrate(p, cfg), Error);
  cfg.tau = 0.0;
  CHECK_THROWS_AS(integrate(p, cfg), Error);
}

TEST_CASE("temporal order sweep recovers second order for the corrected midpoint rule") {
  const auto p = make_problem(Equation::Heat, 8);
  IntegrationConfig cfg;
  cfg.tableau = midpoint_corrected(1);
  cfg.t_end = 0.1;
  cfg.tol = 1e-12;
  const auto sweep = temporal_order(p, cfg, {0.1, 0.05, 0.025});
  REQUIRE(sweep.taus.size() == 3);
  REQUIRE(sweep.errors_max.size() == 3);
  CHECK_FALSE(sweep.solver_failure);
  CHECK(sweep.errors_max[0] > sweep.errors_max[2]);
  CHECK(sweep.slope >= 1.5);
  CHECK(sweep.slope <= 2.5);
  CHECK_THROWS_AS(temporal_order(p, cfg, {}), Error);
}
