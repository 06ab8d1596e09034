#ifndef PIDD_CONDITIONS_HPP
#define PIDD_CONDITIONS_HPP

#include <string>
#include <vector>

#include "pidd/systems.hpp"

namespace pidd {

enum class Direction { UiZZero, UiYZero, Both, Neither };

std::string direction_name(Direction d);

struct OrderCheck {
  int j = 0;
  double lhs_sum = 0.0;  // dominating side
  double rhs_sum = 0.0;  // dominated side
  bool satisfied = false;
};

// One orientation of the sufficient condition: `order_ok` is the truncation
// order comparison, `per_order` the per-order SNR sums (Poisson only).
struct OrientationCheck {
  bool order_ok = false;
  std::vector<OrderCheck> per_order;
  bool satisfied = false;
};

struct ConditionReport {
  std::string system_kind;       // "poisson" | "multinomial"
  Direction direction = Direction::Neither;
  OrientationCheck y_over_z;     // passing means UI(M;Z\Y) == 0
  OrientationCheck z_over_y;     // passing means UI(M;Y\Z) == 0
  double min_p_y = 0.0;          // multinomial minima
  double min_p_z = 0.0;
};

// Per-order comparison of raw SNR sums, both orientations; ties satisfy the
// non-strict inequality. The conditions are sufficient only: Neither means
// inconclusive, not UI > 0.
ConditionReport check_poisson(const PoissonSystemSpec& spec);

/// min-probability comparison of the thinning vectors, both orientations.
ConditionReport check_multinomial(const MultinomialSystemSpec& spec);

}  // namespace pidd

#endif  // PIDD_CONDITIONS_HPP
