#ifndef PIDD_SYSTEMS_HPP
#define PIDD_SYSTEMS_HPP

#include <map>
#include <string>
#include <vector>

#include "pidd/common.hpp"
#include "pidd/distributions.hpp"

namespace pidd {

enum class Side { Y, Z };

// Finite-support pmf of the scalar source M. Poisson-system use requires a
// strictly positive support; the multinomial system uses nonnegative
// integers (stored as doubles, validated integral).
struct ScalarMPmf {
  std::vector<double> support;
  std::vector<double> probs;

  void validate() const;
};

// gamma_* follow the canonical tuple order of build_a_matrix(d, d_prime),
// so gamma entry t at order j yields the rate gamma_t * m^j.
struct PoissonSystemSpec {
  ScalarMPmf m_pmf;
  int d1 = 0, d1_prime = 0;
  int d2 = 0, d2_prime = 0;
  std::vector<double> gamma_y;
  std::vector<double> gamma_z;

  void validate() const;
  const std::vector<double>& gamma(Side s) const { return s == Side::Y ? gamma_y : gamma_z; }
  int dim(Side s) const { return s == Side::Y ? d1 : d2; }
  int order(Side s) const { return s == Side::Y ? d1_prime : d2_prime; }
};

PoissonSystemSpec make_poisson_spec(ScalarMPmf m_pmf, int d1, int d1_prime, int d2,
                                    int d2_prime,
                                    const std::map<IndexTuple, double>& gamma_y,
                                    const std::map<IndexTuple, double>& gamma_z);

struct MultinomialSystemSpec {
  ScalarMPmf m_pmf;  // nonnegative integer support
  std::vector<double> p_y;
  std::vector<double> p_z;

  void validate() const;
  const std::vector<double>& p(Side s) const { return s == Side::Y ? p_y : p_z; }
};

/// A labelled support point: the scalar M as a 1-vector, count vectors as-is.
using Point = std::vector<double>;

struct Axis {
  std::string name;
  std::vector<Point> points;
};

// Dense joint table over named axes, row-major in axis order. tail_mass is
// the probability lost to truncated conditionals, so total mass plus
// tail_mass is 1 up to rounding.
struct JointPmf {
  std::vector<Axis> axes;
  std::vector<double> table;
  double tail_mass = 0.0;

  size_t axis_size(size_t a) const { return axes[a].points.size(); }
  size_t cells() const { return table.size(); }
  double total_mass() const;
  void validate(double atol = 1e-9) const;

  /// Sums out every axis not listed; `keep` must be increasing.
  JointPmf marginal(const std::vector<size_t>& keep) const;

  /// Marginal probability vector along one axis.
  std::vector<double> axis_marginal(size_t a) const;
};

/// P(side | M = m) as a truncated multivariate Poisson table (rates gamma * m^j).
FinitePmf poisson_conditional(const PoissonSystemSpec& spec, Side side, double m,
                              double epsilon);

/// Build the parameters backing poisson_conditional (exposed for the posterior).
MvPoissonParams poisson_conditional_params(const PoissonSystemSpec& spec, Side side,
                                           double m);

/// Exact Multinomial(m, p_side) table over all compositions of m.
FinitePmf multinomial_conditional(const MultinomialSystemSpec& spec, Side side, int m);

JointPmf pairwise_joint(const PoissonSystemSpec& spec, Side side, double epsilon);
JointPmf pairwise_joint(const MultinomialSystemSpec& spec, Side side);

/// (M, Y, Z) joint under the conditional-independence coupling P(m)P(y|m)P(z|m).
JointPmf full_joint_conditionally_independent(const PoissonSystemSpec& spec,
                                              double epsilon);
JointPmf full_joint_conditionally_independent(const MultinomialSystemSpec& spec);

// Per-m conditional tables on a shared support (the union across m), aligned
// with the returned support list; used by the joints, the verifier and the
// oracle problem builder.
struct ConditionalFamily {
  std::vector<CountVec> support;            // shared output support
  std::vector<std::vector<double>> rows;    // one row per m, aligned with support
  std::vector<double> row_tail;             // mass outside `support` per m
};

ConditionalFamily conditional_family(const PoissonSystemSpec& spec, Side side,
                                     double epsilon);
ConditionalFamily conditional_family(const MultinomialSystemSpec& spec, Side side);

Point to_point(const CountVec& v);

}  // namespace pidd

#endif  // PIDD_SYSTEMS_HPP
