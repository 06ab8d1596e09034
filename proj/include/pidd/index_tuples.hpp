#ifndef PIDD_INDEX_TUPLES_HPP
#define PIDD_INDEX_TUPLES_HPP

#include <cstdint>
#include <vector>

#include "pidd/common.hpp"

namespace pidd {

/// All strictly increasing j-tuples over [d], lexicographic order.
std::vector<IndexTuple> enum_index_tuples(int d, int j);

// Binary incidence matrix mapping generator variables to the dependent count
// vector: column t has ones exactly at the rows named by its index tuple.
// Columns are grouped by tuple length 1..d_prime, lexicographic within a
// group, so the first d columns form the identity block.
struct AMatrix {
  int d = 0;
  int d_prime = 0;
  std::vector<IndexTuple> column_index;
  std::vector<uint8_t> entries;  // d x n_cols, row-major

  int n_cols() const { return static_cast<int>(column_index.size()); }
  uint8_t at(int row, int col) const { return entries[static_cast<size_t>(row) * column_index.size() + col]; }

  /// A * kg (counts of the aggregated vector produced by generator counts kg).
  CountVec apply(const CountVec& kg) const;
};

AMatrix build_a_matrix(int d, int d_prime);

}  // namespace pidd

#endif  // PIDD_INDEX_TUPLES_HPP
