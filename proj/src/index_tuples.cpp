#include "pidd/index_tuples.hpp"

#include <numeric>

namespace pidd {

std::vector<IndexTuple> enum_index_tuples(int d, int j) {
  require(j >= 1, "enum_index_tuples: j must be positive");
  require(j <= d, "enum_index_tuples: j must not exceed d");
  std::vector<IndexTuple> out;
  IndexTuple cur(j);
  auto rec = [&](auto&& self, int pos, int start) -> void {
    if (pos == j) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v <= d - (j - pos - 1); ++v) {
      cur[pos] = v;
      self(self, pos + 1, v + 1);
    }
  };
  rec(rec, 0, 1);
  return out;
}

CountVec AMatrix::apply(const CountVec& kg) const {
  require(static_cast<int>(kg.size()) == n_cols(), "AMatrix::apply: dimension mismatch");
  CountVec k(d, 0);
  for (int c = 0; c < n_cols(); ++c) {
    if (kg[c] == 0) continue;
    for (int r : column_index[c]) k[r - 1] += kg[c];
  }
  return k;
}

AMatrix build_a_matrix(int d, int d_prime) {
  require(d >= 1, "build_a_matrix: d must be positive");
  require(d_prime >= 1 && d_prime <= d, "build_a_matrix: need 1 <= d' <= d");
  AMatrix a;
  a.d = d;
  a.d_prime = d_prime;
  for (int j = 1; j <= d_prime; ++j) {
    auto tuples = enum_index_tuples(d, j);
    a.column_index.insert(a.column_index.end(), tuples.begin(), tuples.end());
  }
  a.entries.assign(static_cast<size_t>(d) * a.column_index.size(), 0);
  for (size_t c = 0; c < a.column_index.size(); ++c) {
    for (int r : a.column_index[c]) a.entries[static_cast<size_t>(r - 1) * a.column_index.size() + c] = 1;
  }
  return a;
}

}  // namespace pidd
