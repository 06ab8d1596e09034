#ifndef PIDD_DEGRADATION_HPP
#define PIDD_DEGRADATION_HPP

#include <iosfwd>
#include <vector>

#include "pidd/common.hpp"
#include "pidd/distributions.hpp"
#include "pidd/index_tuples.hpp"
#include "pidd/systems.hpp"

namespace pidd {

// Conditional probability table: rows[i] is the output pmf for
// input_support[i]. Row supports are subsets of output_support.
struct Channel {
  std::vector<CountVec> input_support;
  std::vector<CountVec> output_support;
  std::vector<FinitePmf> rows;

  void validate(double row_atol = 1e-10) const;
};

// Numerical witness that the channel carries P(Y|m) onto P(Z|m) for every m:
// max_tv over m of the composed-vs-target total variation, and I(M;Z|Y)
// under the Markov joint P(m)P(y|m)row(y)(z).
struct DegradationCertificate {
  double max_tv = 0.0;
  double conditional_mi = 0.0;
  double tv_tolerance = 0.0;
  double mi_tolerance = 0.0;
  bool pass = false;
};

struct VerifyTolerances {
  double tv = 1e-7;
  double mi = 1e-6;
};

// Posterior over generator vectors given an aggregated observation, by Bayes
// over the finite fibre {kg >= 0 : y == A kg}. The result does not depend on
// the m the rates were materialized at.
FinitePmf generator_posterior(const MvPoissonParams& params, const CountVec& y);

// Order-wise multinomial thinning of Y generators onto Z generators, with a
// surplus class absorbing the excess SNR; orders above the Z truncation are
// discarded entirely. Requires the per-order SNR dominance (else the surplus
// class probability is negative).
Channel generator_thinning(const PoissonSystemSpec& spec,
                           const std::vector<CountVec>& inputs);

/// Deterministic aggregation rows: point mass at A * input.
Channel aggregate(const AMatrix& a_matrix, const std::vector<CountVec>& inputs);

// Composition posterior -> thinning -> aggregation, materialized on the
// union truncated Y box; rows are exact distributions (no renormalization).
Channel poisson_degradation_channel(const PoissonSystemSpec& spec, double epsilon);

// Multinomial(sum of kept Y classes, p_z*) rows; the last Z class takes the
// slack so each output sums to the input's trial count.
Channel multinomial_degradation_channel(const MultinomialSystemSpec& spec);

// Analytic marginal of a multinomial thinned through an index subset:
// Multinomial(n, q*) with the compound class probabilities.
FinitePmf compound_multinomial_marginal(int n, const std::vector<double>& p,
                                        const std::vector<double>& q,
                                        const std::vector<int>& index_set);

DegradationCertificate verify_degradation(const PoissonSystemSpec& spec,
                                          const Channel& channel, double epsilon,
                                          const VerifyTolerances& tol);
DegradationCertificate verify_degradation(const MultinomialSystemSpec& spec,
                                          const Channel& channel, double epsilon,
                                          const VerifyTolerances& tol);

/// CSV export, columns input,output,probability; points joined with ';'.
void write_channel_csv(const Channel& channel, std::ostream& out);
Channel read_channel_csv(std::istream& in);

}  // namespace pidd

#endif  // PIDD_DEGRADATION_HPP
