#include <doctest.h>

#include <algorithm>

#include "pidd/index_tuples.hpp"

using namespace pidd;

TEST_CASE("enum_index_tuples enumerates lexicographically") {
  const auto t32 = enum_index_tuples(3, 2);
  REQUIRE(t32.size() == 3);
  CHECK(t32[0] == IndexTuple{1, 2});
  CHECK(t32[1] == IndexTuple{1, 3});
  CHECK(t32[2] == IndexTuple{2, 3});

  CHECK(enum_index_tuples(1, 1) == std::vector<IndexTuple>{{1}});
  CHECK(enum_index_tuples(4, 4) == std::vector<IndexTuple>{{1, 2, 3, 4}});
}

TEST_CASE("enum_index_tuples rejects bad orders") {
  CHECK_THROWS_AS(enum_index_tuples(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(enum_index_tuples(3, 0), std::invalid_argument);
}

TEST_CASE("A matrix for the bivariate construction") {
  const AMatrix a = build_a_matrix(2, 2);
  REQUIRE(a.n_cols() == 3);
  CHECK(a.column_index == std::vector<IndexTuple>{{1}, {2}, {1, 2}});
  CHECK(a.at(0, 0) == 1);
  CHECK(a.at(0, 1) == 0);
  CHECK(a.at(0, 2) == 1);
  CHECK(a.at(1, 0) == 0);
  CHECK(a.at(1, 1) == 1);
  CHECK(a.at(1, 2) == 1);
}

TEST_CASE("A matrix with order one is the identity") {
  const AMatrix a = build_a_matrix(3, 1);
  REQUIRE(a.n_cols() == 3);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) CHECK(a.at(r, c) == (r == c ? 1 : 0));
  }
}

TEST_CASE("every column matches its index tuple") {
  const AMatrix a = build_a_matrix(3, 2);
  REQUIRE(a.n_cols() == 6);
  // Column (1,3) must be [1,0,1]^T.
  const int col13 = 4;
  CHECK(a.column_index[col13] == IndexTuple{1, 3});
  CHECK(a.at(0, col13) == 1);
  CHECK(a.at(1, col13) == 0);
  CHECK(a.at(2, col13) == 1);
  for (int c = 0; c < a.n_cols(); ++c) {
    int ones = 0;
    for (int r = 0; r < a.d; ++r) {
      const bool in_tuple =
          std::find(a.column_index[c].begin(), a.column_index[c].end(), r + 1) !=
          a.column_index[c].end();
      CHECK(a.at(r, c) == (in_tuple ? 1 : 0));
      ones += a.at(r, c);
    }
    CHECK(ones == static_cast<int>(a.column_index[c].size()));
  }
}

TEST_CASE("A matrix rejects d_prime above d") {
  CHECK_THROWS_AS(build_a_matrix(2, 3), std::invalid_argument);
}

TEST_CASE("apply computes the aggregated counts") {
  const AMatrix a = build_a_matrix(2, 2);
  CHECK(a.apply({1, 0, 2}) == CountVec{3, 2});
}
