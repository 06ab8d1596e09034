#ifndef PIDD_INFORMATION_HPP
#define PIDD_INFORMATION_HPP

#include <span>
#include <vector>

#include "pidd/distributions.hpp"
#include "pidd/systems.hpp"

namespace pidd {

// An information quantity in bits together with an upper bound on the error
// introduced by truncated tail mass.
struct InfoValue {
  double bits = 0.0;
  double truncation_bound = 0.0;
};

InfoValue entropy(std::span<const double> probs, double tail_mass = 0.0);
InfoValue entropy(const FinitePmf& pmf);

// I(A;B) over the joint, marginalizing any axis not named. Truncated tables
// are renormalized first; the value refers to the distribution conditioned on
// the included support. axes_a and axes_b must be disjoint.
InfoValue mutual_information(const JointPmf& joint, const std::vector<size_t>& axes_a,
                             const std::vector<size_t>& axes_b);

/// I(a;b | cond) on a three-axis joint.
InfoValue conditional_mutual_information(const JointPmf& joint, size_t axis_a,
                                         size_t axis_b, size_t axis_cond);

// Snap tiny negatives (rounding) to zero; anything below -1e-12 means the
// computation itself is broken and raises NumericalIntegrityError.
double clamp_information(double bits, const char* label);

/// tail * log2(cells) + h2(tail), the perturbation envelope used throughout.
double truncation_envelope(double tail_mass, size_t cells);

}  // namespace pidd

#endif  // PIDD_INFORMATION_HPP
