#ifndef PIDD_DISTRIBUTIONS_HPP
#define PIDD_DISTRIBUTIONS_HPP

#include <map>
#include <span>
#include <vector>

#include "pidd/common.hpp"
#include "pidd/index_tuples.hpp"

namespace pidd {

// Dense pmf over an explicit list of integer-vector support points.
// tail_mass records probability omitted by truncation, so that
// sum(probs) + tail_mass == 1 up to rounding.
struct FinitePmf {
  std::vector<CountVec> support;
  std::vector<double> probs;
  double tail_mass = 0.0;

  double total_mass() const;
  // Checks nonnegativity, distinct support and mass accounting.
  void validate(double atol = 1e-12) const;
};

// Rates of the mutually independent generator variables, one per tuple of
// A_j^d for j in [d_prime], in the canonical (length-grouped, lexicographic)
// column order of the corresponding AMatrix.
struct MvPoissonParams {
  int d = 0;
  int d_prime = 0;
  std::vector<double> rates;

  int n_generators() const { return static_cast<int>(rates.size()); }
};

/// Validates completeness of `lambdas` over every A_j^d, j in [d_prime].
MvPoissonParams make_mv_poisson_params(int d, int d_prime,
                                       const std::map<IndexTuple, double>& lambdas);

double scalar_poisson_pmf(double lambda, int k);

/// log of the scalar Poisson pmf; -inf when lambda == 0 and k > 0.
double scalar_poisson_log_pmf(double lambda, int k);

double multinomial_pmf(int n, std::span<const double> p, const CountVec& k);

// Multivariate pmf evaluated through the closed-form sum over the reduced
// index set (the form that factors base rates out and divides by them).
// Degenerate base rates delegate to the generator enumeration, which has no
// such division.
double mv_poisson_pmf(const MvPoissonParams& params, const CountVec& k);

// Independent oracle: direct enumeration of all generator vectors kg >= 0
// with k == A kg, summing the products of scalar Poisson terms.
double mv_poisson_pmf_bruteforce(const MvPoissonParams& params, const CountVec& k);

// Pmf restricted to the box [0, k_max]^d, with k_max the smallest cap whose
// per-component Poisson tail is <= epsilon / n_generators (union bound over
// components; each K_i is Poisson with the sum of its covering rates).
// tail_mass is the exact mass left outside the box.
FinitePmf truncated_support(const MvPoissonParams& params, double epsilon);

/// Smallest c with P(Poisson(lambda) > c) <= tail_bound.
int poisson_tail_cap(double lambda, double tail_bound);

/// Box cap used by truncated_support for the given epsilon.
int poisson_box_cap(const MvPoissonParams& params, double epsilon);

/// Exact pmf table over [0, k_max]^d, built by generator-space convolution.
FinitePmf poisson_box_pmf(const MvPoissonParams& params, int k_max);

/// Upper tail P(Poisson(lambda) > c), summed directly from c+1 upward.
double poisson_upper_tail(double lambda, int c);

}  // namespace pidd

#endif  // PIDD_DISTRIBUTIONS_HPP
