#include "pidd/conditions.hpp"

#include <algorithm>

#include "pidd/index_tuples.hpp"

namespace pidd {

std::string direction_name(Direction d) {
  switch (d) {
    case Direction::UiZZero: return "ui_z_zero";
    case Direction::UiYZero: return "ui_y_zero";
    case Direction::Both: return "both";
    case Direction::Neither: return "neither";
  }
  return "neither";
}

namespace {

// Sum of gamma entries per covariance order, canonical layout.
std::vector<double> per_order_sums(int d, int d_prime, const std::vector<double>& gamma) {
  std::vector<double> sums(d_prime, 0.0);
  size_t col = 0;
  for (int j = 1; j <= d_prime; ++j) {
    const size_t block = enum_index_tuples(d, j).size();
    KahanSum s;
    for (size_t t = 0; t < block; ++t) s.add(gamma[col++]);
    sums[j - 1] = s.value();
  }
  return sums;
}

OrientationCheck poisson_orientation(int dom_order, const std::vector<double>& dom_sums,
                                     int sub_order, const std::vector<double>& sub_sums) {
  OrientationCheck check;
  check.order_ok = dom_order >= sub_order;
  bool all = true;
  for (int j = 1; j <= sub_order; ++j) {
    OrderCheck oc;
    oc.j = j;
    oc.lhs_sum = j <= dom_order ? dom_sums[j - 1] : 0.0;
    oc.rhs_sum = sub_sums[j - 1];
    oc.satisfied = oc.lhs_sum >= oc.rhs_sum;  // ties admit the construction
    all = all && oc.satisfied;
    check.per_order.push_back(oc);
  }
  check.satisfied = check.order_ok && all;
  return check;
}

Direction combine(bool y_over_z, bool z_over_y) {
  if (y_over_z && z_over_y) return Direction::Both;
  if (y_over_z) return Direction::UiZZero;
  if (z_over_y) return Direction::UiYZero;
  return Direction::Neither;
}

}  // namespace

ConditionReport check_poisson(const PoissonSystemSpec& spec) {
  spec.validate();
  ConditionReport report;
  report.system_kind = "poisson";
  const auto y_sums = per_order_sums(spec.d1, spec.d1_prime, spec.gamma_y);
  const auto z_sums = per_order_sums(spec.d2, spec.d2_prime, spec.gamma_z);
  report.y_over_z = poisson_orientation(spec.d1_prime, y_sums, spec.d2_prime, z_sums);
  report.z_over_y = poisson_orientation(spec.d2_prime, z_sums, spec.d1_prime, y_sums);
  report.direction = combine(report.y_over_z.satisfied, report.z_over_y.satisfied);
  return report;
}

ConditionReport check_multinomial(const MultinomialSystemSpec& spec) {
  spec.validate();
  ConditionReport report;
  report.system_kind = "multinomial";
  report.min_p_y = *std::min_element(spec.p_y.begin(), spec.p_y.end());
  report.min_p_z = *std::min_element(spec.p_z.begin(), spec.p_z.end());
  report.y_over_z.order_ok = true;
  report.y_over_z.satisfied = report.min_p_z >= report.min_p_y;
  report.z_over_y.order_ok = true;
  report.z_over_y.satisfied = report.min_p_y >= report.min_p_z;
  report.direction = combine(report.y_over_z.satisfied, report.z_over_y.satisfied);
  return report;
}

}  // namespace pidd
