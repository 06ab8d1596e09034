#include <doctest.h>

#include <cmath>
#include <random>

#include "pidd/information.hpp"
#include "support.hpp"

using namespace pidd;

namespace {

// Random three-axis joint used by the chain-rule property.
JointPmf random_joint3(std::mt19937& rng, size_t na, size_t nb, size_t nc) {
  JointPmf joint;
  joint.axes = {{"M", {}}, {"Y", {}}, {"Z", {}}};
  for (size_t i = 0; i < na; ++i) joint.axes[0].points.push_back({static_cast<double>(i)});
  for (size_t i = 0; i < nb; ++i) joint.axes[1].points.push_back({static_cast<double>(i)});
  for (size_t i = 0; i < nc; ++i) joint.axes[2].points.push_back({static_cast<double>(i)});
  std::uniform_real_distribution<double> w(0.0, 1.0);
  joint.table.resize(na * nb * nc);
  double total = 0.0;
  for (double& v : joint.table) {
    v = w(rng);
    total += v;
  }
  for (double& v : joint.table) v /= total;
  return joint;
}

}  // namespace

TEST_CASE("entropy basics") {
  CHECK(entropy(std::vector<double>{0.5, 0.5}).bits == doctest::Approx(1.0));
  CHECK(entropy(std::vector<double>{1.0}).bits == doctest::Approx(0.0));
  CHECK(entropy(std::vector<double>{0.25, 0.75}).bits ==
        doctest::Approx(0.81127812445913286391).epsilon(1e-14));
  CHECK(entropy(std::vector<double>{0.5, 0.0, 0.5}).bits == doctest::Approx(1.0));
}

TEST_CASE("mutual information of independent and copy joints") {
  JointPmf joint;
  joint.axes = {{"M", {{0.0}, {1.0}}}, {"Y", {{0.0}, {1.0}}}};
  SUBCASE("independent product") {
    joint.table = {0.25, 0.25, 0.25, 0.25};
    CHECK(mutual_information(joint, {0}, {1}).bits == doctest::Approx(0.0));
  }
  SUBCASE("copy channel") {
    joint.table = {0.5, 0.0, 0.0, 0.5};
    CHECK(mutual_information(joint, {0}, {1}).bits == doctest::Approx(1.0));
  }
}

TEST_CASE("chain rule holds on random joints") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const JointPmf joint = random_joint3(rng, 3, 4, 3);
    const double i_myz = mutual_information(joint, {0}, {1, 2}).bits;
    const double i_my = mutual_information(joint, {0}, {1}).bits;
    const double i_mz = mutual_information(joint, {0}, {2}).bits;
    const double i_mz_given_y = conditional_mutual_information(joint, 0, 2, 1).bits;
    const double i_my_given_z = conditional_mutual_information(joint, 0, 1, 2).bits;
    CHECK(i_myz == doctest::Approx(i_my + i_mz_given_y).epsilon(1e-10));
    CHECK(i_myz == doctest::Approx(i_mz + i_my_given_z).epsilon(1e-10));
  }
}

TEST_CASE("cmi vanishes on Markov and copy joints") {
  JointPmf joint;
  joint.axes = {{"M", {{0.0}, {1.0}}}, {"Y", {{0.0}, {1.0}}}, {"Z", {{0.0}, {1.0}}}};
  SUBCASE("copy joint Z=Y=M") {
    joint.table.assign(8, 0.0);
    joint.table[0] = 0.5;  // (0,0,0)
    joint.table[7] = 0.5;  // (1,1,1)
    CHECK(conditional_mutual_information(joint, 0, 2, 1).bits == doctest::Approx(0.0));
  }
  SUBCASE("M->Y->Z thinning") {
    // P(y|m) = delta, row(y->z) independent of m.
    const double row0[2] = {0.7, 0.3};
    const double row1[2] = {0.2, 0.8};
    joint.table.assign(8, 0.0);
    for (int m = 0; m < 2; ++m) {
      const double* row = m == 0 ? row0 : row1;
      for (int z = 0; z < 2; ++z) joint.table[(m * 2 + m) * 2 + z] = 0.5 * row[z];
    }
    CHECK(conditional_mutual_information(joint, 0, 2, 1).bits <= 1e-12);
  }
}

TEST_CASE("clamp distinguishes rounding from bugs") {
  CHECK(clamp_information(-5e-13, "test") == 0.0);
  CHECK(clamp_information(0.25, "test") == 0.25);
  CHECK_THROWS_AS(clamp_information(-1e-9, "test"), NumericalIntegrityError);
}

TEST_CASE("truncation envelope grows from zero") {
  CHECK(truncation_envelope(0.0, 100) == 0.0);
  CHECK(truncation_envelope(1e-10, 100) > 0.0);
  CHECK(truncation_envelope(1e-10, 100) < 1e-8);
}

TEST_CASE("MI is stable under truncation refinement") {
  // P(M) uniform on {1,2}, P(Y|M) = Poisson(M) truncated at 1e-10; widening
  // the box further must not move the value at the 1e-8 level.
  const auto spec = make_poisson_spec({{1.0, 2.0}, {0.5, 0.5}}, 1, 1, 1, 1,
                                      {{{1}, 1.0}}, {{{1}, 1.0}});
  const JointPmf base = pairwise_joint(spec, Side::Y, 1e-10);
  const JointPmf refined = pairwise_joint(spec, Side::Y, 1e-14);
  CHECK(refined.axes[1].points.size() > base.axes[1].points.size());
  const double a = mutual_information(base, {0}, {1}).bits;
  const double b = mutual_information(refined, {0}, {1}).bits;
  CHECK(a == doctest::Approx(b).epsilon(1e-8));
}
