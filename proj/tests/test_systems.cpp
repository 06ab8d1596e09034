#include <doctest.h>

#include <cmath>
#include <random>

#include "pidd/systems.hpp"
#include "support.hpp"

using namespace pidd;

namespace {

PoissonSystemSpec scalar_spec(double gamma_y, double gamma_z) {
  return make_poisson_spec({{1.0, 2.0}, {0.5, 0.5}}, 1, 1, 1, 1, {{{1}, gamma_y}},
                           {{{1}, gamma_z}});
}

}  // namespace

TEST_CASE("scalar Poisson conditional is the ideal channel") {
  const auto spec = scalar_spec(2.0, 1.0);
  const FinitePmf cond = poisson_conditional(spec, Side::Y, 1.0, 1e-10);
  CHECK(cond.probs[0] == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(cond.total_mass() >= 1.0 - 1e-10);
}

TEST_CASE("rates scale with powers of m") {
  const auto spec = make_poisson_spec(
      {{2.0}, {1.0}}, 2, 2, 1, 1,
      {{{1}, 1.0}, {{2}, 0.5}, {{1, 2}, 0.25}}, {{{1}, 0.5}});
  const auto params = poisson_conditional_params(spec, Side::Y, 2.0);
  CHECK(params.rates[0] == doctest::Approx(2.0));
  CHECK(params.rates[1] == doctest::Approx(1.0));
  CHECK(params.rates[2] == doctest::Approx(1.0));  // 0.25 * 2^2
}

TEST_CASE("m must be positive in the Poisson system") {
  const auto spec = scalar_spec(1.0, 1.0);
  CHECK_THROWS_AS(poisson_conditional(spec, Side::Y, 0.0, 1e-8), std::invalid_argument);
  ScalarMPmf bad{{0.0, 1.0}, {0.5, 0.5}};
  CHECK_THROWS_AS(
      make_poisson_spec(bad, 1, 1, 1, 1, {{{1}, 1.0}}, {{{1}, 1.0}}),
      std::invalid_argument);
}

TEST_CASE("multinomial conditional enumerates compositions exactly") {
  MultinomialSystemSpec spec;
  spec.m_pmf = {{0.0, 1.0, 3.0}, {0.2, 0.3, 0.5}};
  spec.p_y = {0.2, 0.8};
  spec.p_z = {0.5, 0.5};

  const FinitePmf at0 = multinomial_conditional(spec, Side::Y, 0);
  REQUIRE(at0.support.size() == 1);
  CHECK(at0.support[0] == CountVec{0, 0});
  CHECK(at0.probs[0] == doctest::Approx(1.0));

  // Single trial is categorical: support (0,1) then (1,0).
  const FinitePmf at1 = multinomial_conditional(spec, Side::Y, 1);
  REQUIRE(at1.support.size() == 2);
  CHECK(at1.support[0] == CountVec{0, 1});
  CHECK(at1.probs[0] == doctest::Approx(0.8));
  CHECK(at1.probs[1] == doctest::Approx(0.2));

  const FinitePmf at3 = multinomial_conditional(spec, Side::Y, 3);
  CHECK(at3.support.size() == 4);
  CHECK(at3.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(at3.tail_mass == 0.0);
}

TEST_CASE("pairwise joint marginals are consistent") {
  const auto spec = scalar_spec(1.5, 0.8);
  const JointPmf joint = pairwise_joint(spec, Side::Y, 1e-10);
  joint.validate(1e-9);
  const auto pm = joint.axis_marginal(0);
  REQUIRE(pm.size() == 2);
  CHECK(pm[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(pm[1] == doctest::Approx(0.5).epsilon(1e-9));
  // Mixture marginal over Y.
  const auto py = joint.axis_marginal(1);
  const ConditionalFamily fam = conditional_family(spec, Side::Y, 1e-10);
  for (size_t i = 0; i < py.size(); ++i) {
    const double expect = 0.5 * fam.rows[0][i] + 0.5 * fam.rows[1][i];
    CHECK(py[i] == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("degenerate M makes the joint a single conditional") {
  const auto spec = make_poisson_spec({{1.0}, {1.0}}, 1, 1, 1, 1, {{{1}, 2.0}},
                                      {{{1}, 1.0}});
  const JointPmf joint = pairwise_joint(spec, Side::Y, 1e-10);
  const FinitePmf cond = poisson_conditional(spec, Side::Y, 1.0, 1e-10);
  for (size_t i = 0; i < cond.support.size(); ++i) {
    CHECK(joint.table[i] == doctest::Approx(cond.probs[i]).epsilon(1e-13));
  }
}

TEST_CASE("conditionally independent joint has matching pairwise marginals") {
  MultinomialSystemSpec spec;
  spec.m_pmf = {{1.0, 2.0}, {0.4, 0.6}};
  spec.p_y = {0.3, 0.7};
  spec.p_z = {0.6, 0.4};
  const JointPmf joint = full_joint_conditionally_independent(spec);
  joint.validate(1e-12);
  const JointPmf pair_y = pairwise_joint(spec, Side::Y);
  const JointPmf my = joint.marginal({0, 1});
  REQUIRE(my.table.size() == pair_y.table.size());
  for (size_t i = 0; i < my.table.size(); ++i) {
    CHECK(my.table[i] == doctest::Approx(pair_y.table[i]).epsilon(1e-12));
  }
  const JointPmf pair_z = pairwise_joint(spec, Side::Z);
  const JointPmf mz = joint.marginal({0, 2});
  for (size_t i = 0; i < mz.table.size(); ++i) {
    CHECK(mz.table[i] == doctest::Approx(pair_z.table[i]).epsilon(1e-12));
  }
}

TEST_CASE("order-one Poisson conditional factorizes") {
  const auto spec = make_poisson_spec({{1.0}, {1.0}}, 2, 1, 1, 1,
                                      {{{1}, 0.8}, {{2}, 1.2}}, {{{1}, 0.5}});
  const FinitePmf cond = poisson_conditional(spec, Side::Y, 1.0, 1e-10);
  for (size_t i = 0; i < cond.support.size(); ++i) {
    const double expect = scalar_poisson_pmf(0.8, cond.support[i][0]) *
                          scalar_poisson_pmf(1.2, cond.support[i][1]);
    CHECK(cond.probs[i] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("random feasible generators produce valid specs") {
  std::mt19937 rng(11);
  for (int i = 0; i < 5; ++i) {
    const auto ps = testing::random_feasible_poisson_spec(rng);
    ps.validate();
    const auto ms = testing::random_feasible_multinomial_spec(rng);
    ms.validate();
  }
}
