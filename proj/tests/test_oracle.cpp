#include <doctest.h>

#include <cmath>
#include <random>

#include "pidd/degradation.hpp"
#include "pidd/information.hpp"
#include "pidd/oracle.hpp"
#include "pidd/pid.hpp"
#include "support.hpp"

using namespace pidd;

namespace {

// Raw two-axis joint from a dense table.
JointPmf raw_pairwise(const std::vector<double>& m_vals, size_t n_side,
                      const std::vector<double>& table, const char* side) {
  JointPmf joint;
  Axis m_axis{"M", {}};
  for (double m : m_vals) m_axis.points.push_back({m});
  Axis v_axis{side, {}};
  for (size_t i = 0; i < n_side; ++i) v_axis.points.push_back({static_cast<double>(i)});
  joint.axes = {std::move(m_axis), std::move(v_axis)};
  joint.table = table;
  return joint;
}

}  // namespace

TEST_CASE("copy system has zero unique information either way") {
  // Y = Z = M, uniform binary.
  const std::vector<double> table{0.5, 0.0, 0.0, 0.5};
  const JointPmf my = raw_pairwise({0.0, 1.0}, 2, table, "Y");
  const JointPmf mz = raw_pairwise({0.0, 1.0}, 2, table, "Z");
  for (UiTarget target : {UiTarget::ZGivenY, UiTarget::YGivenZ}) {
    const OracleProblem prob = make_oracle_problem(my, mz, target);
    const OracleSolution sol = solve_ui(prob);
    CHECK(sol.converged);
    CHECK(sol.ui_value <= 1e-9);
  }
}

TEST_CASE("copy versus independent side gives one full bit of unique information") {
  // Y = M uniform binary, Z an independent fair bit.
  const JointPmf my = raw_pairwise({0.0, 1.0}, 2, {0.5, 0.0, 0.0, 0.5}, "Y");
  const JointPmf mz = raw_pairwise({0.0, 1.0}, 2, {0.25, 0.25, 0.25, 0.25}, "Z");

  const OracleSolution ui_z = solve_ui(make_oracle_problem(my, mz, UiTarget::ZGivenY));
  CHECK(ui_z.converged);
  CHECK(ui_z.ui_value <= 1e-9);

  const OracleSolution ui_y = solve_ui(make_oracle_problem(my, mz, UiTarget::YGivenZ));
  CHECK(ui_y.converged);
  CHECK(ui_y.ui_value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mismatched M marginals are rejected") {
  const JointPmf my = raw_pairwise({0.0, 1.0}, 2, {0.5, 0.0, 0.0, 0.5}, "Y");
  const JointPmf mz = raw_pairwise({0.0, 1.0}, 2, {0.4, 0.0, 0.0, 0.6}, "Z");
  CHECK_THROWS_AS(make_oracle_problem(my, mz, UiTarget::ZGivenY), std::invalid_argument);
}

TEST_CASE("solution is sandwiched by the independent start") {
  std::mt19937 rng(3);
  const auto spec = testing::random_feasible_multinomial_spec(rng, 3, 4, 2);
  const OracleProblem prob = build_problem(spec, 0.0, UiTarget::ZGivenY);
  const OracleSolution sol = solve_ui(prob);
  CHECK(sol.ui_value >= 0.0);
  CHECK(sol.ui_value <= sol.objective_initial + 1e-12);
  CHECK(sol.feasibility_violation <= 1e-9);
}

TEST_CASE("certified degradation drives the oracle to zero") {
  const auto spec = make_poisson_spec({{0.8, 1.6}, {0.5, 0.5}}, 1, 1, 1, 1,
                                      {{{1}, 1.4}}, {{{1}, 0.7}});
  const OracleProblem prob = build_problem(spec, 1e-9, UiTarget::ZGivenY);
  const OracleSolution sol = solve_ui(prob);
  CHECK(sol.converged);
  CHECK(sol.ui_value <= 1e-4);
  // The other side keeps positive unique information.
  const OracleSolution other = solve_ui(build_problem(spec, 1e-9, UiTarget::YGivenZ));
  CHECK(other.ui_value > 1e-3);
}

TEST_CASE("oracle agrees with the closed form on a desk instance") {
  const auto spec = make_poisson_spec({{1.0, 2.0}, {0.5, 0.5}}, 1, 1, 1, 1,
                                      {{{1}, 2.0}}, {{{1}, 1.0}});
  const PidResult closed = closed_form_pid(spec, 1e-9);
  const OracleSolution sol = solve_ui(build_problem(spec, 1e-9, UiTarget::ZGivenY));
  REQUIRE(sol.converged);
  const PidResult assembled = assemble_pid_from_ui(
      closed.i_my, closed.i_mz, closed.i_myz, sol.ui_value, Side::Z,
      JointAssumption::ConditionalIndependence);
  CHECK(std::abs(assembled.ui_y.bits - closed.ui_y.bits) <= 1e-3);
  CHECK(std::abs(assembled.ui_z.bits - closed.ui_z.bits) <= 1e-3);
  CHECK(std::abs(assembled.ri.bits - closed.ri.bits) <= 1e-3);
  CHECK(std::abs(assembled.si.bits - closed.si.bits) <= 1e-3);
}

TEST_CASE("coupling marginals match the problem data") {
  std::mt19937 rng(17);
  const auto spec = testing::random_feasible_multinomial_spec(rng, 3, 3, 2);
  const OracleProblem prob = build_problem(spec, 0.0, UiTarget::ZGivenY);
  const OracleSolution sol = solve_ui(prob);
  const size_t ny = prob.y_support.size();
  const size_t nz = prob.z_support.size();
  for (size_t m = 0; m < prob.m_probs.size(); ++m) {
    for (size_t y = 0; y < ny; ++y) {
      double s = 0.0;
      for (size_t z = 0; z < nz; ++z) s += sol.coupling[m][y * nz + z];
      CHECK(std::abs(s - prob.y_given_m[m][y]) <= 1e-8);
    }
  }
}

TEST_CASE("dense cap refuses oversized instances") {
  const JointPmf my = raw_pairwise({0.0, 1.0}, 2, {0.5, 0.0, 0.0, 0.5}, "Y");
  const JointPmf mz = raw_pairwise({0.0, 1.0}, 2, {0.25, 0.25, 0.25, 0.25}, "Z");
  const OracleProblem prob = make_oracle_problem(my, mz, UiTarget::ZGivenY);
  SolveOptions opts;
  opts.dense_cap = 4;
  CHECK_THROWS_AS(solve_ui(prob, opts), std::invalid_argument);
}

TEST_CASE("iteration cap reports non-convergence with the best iterate") {
  const auto spec = make_poisson_spec({{0.8, 1.6}, {0.5, 0.5}}, 1, 1, 1, 1,
                                      {{{1}, 1.4}}, {{{1}, 0.7}});
  const OracleProblem prob = build_problem(spec, 1e-9, UiTarget::ZGivenY);
  SolveOptions opts;
  opts.max_iter = 1;
  const OracleSolution sol = solve_ui(prob, opts);
  CHECK_FALSE(sol.converged);
  CHECK(sol.ui_value <= sol.objective_initial);
}
