#ifndef PIDD_ORACLE_HPP
#define PIDD_ORACLE_HPP

#include <cstddef>
#include <vector>

#include "pidd/common.hpp"
#include "pidd/systems.hpp"

namespace pidd {

enum class UiTarget { ZGivenY, YGivenZ };  // minimize I_Q(M;Z|Y) resp. I_Q(M;Y|Z)

// Independent convex program for the unique information: the pairwise
// marginals pin, per m, a transportation polytope of (Y,Z) couplings.
struct OracleProblem {
  std::vector<double> m_support;            // labels only
  std::vector<CountVec> y_support;
  std::vector<CountVec> z_support;
  std::vector<double> m_probs;              // shared P(m)
  std::vector<std::vector<double>> y_given_m;  // per m, row over y_support
  std::vector<std::vector<double>> z_given_m;
  UiTarget target = UiTarget::ZGivenY;

  size_t coupling_cells() const {
    return m_probs.size() * y_support.size() * z_support.size();
  }
  void validate(double m_marginal_atol = 1e-10) const;
};

/// Construct from raw pairwise joints P(M,Y), P(M,Z); M-marginals must agree.
OracleProblem make_oracle_problem(const JointPmf& joint_my, const JointPmf& joint_mz,
                                  UiTarget target, double m_marginal_atol = 1e-10);

struct SolveOptions {
  double tol_objective = 1e-6;    // stop when the accepted decrease falls below
  double tol_feasibility = 1e-9;  // marginal deviation at the returned iterate
  int max_iter = 20000;
  size_t dense_cap = 2000000;     // refuse instances beyond this cell count
};

struct OracleSolution {
  double ui_value = 0.0;          // bits
  double objective_initial = 0.0;  // at the conditionally independent coupling
  int iterations = 0;
  bool converged = false;
  double feasibility_violation = 0.0;
  // Per-m coupling tables at the returned iterate, row-major y x z.
  std::vector<std::vector<double>> coupling;
};

// Minimizes I_Q(M;Z|Y) by alternating divergence minimization: the induced
// mixture channel r(z|y) is held fixed while each per-m coupling is restored
// to its marginals by cyclic Bregman (IPFP) projections onto the two affine
// constraint sets. Both half-steps are exact partial minimizations, so the
// objective is non-increasing. Starts at the conditionally independent
// coupling, so ui_value is sandwiched between 0 and the initial objective.
OracleSolution solve_ui(const OracleProblem& problem, const SolveOptions& options = {});

/// Materialize an OracleProblem for one side target from a system spec.
OracleProblem build_problem(const PoissonSystemSpec& spec, double epsilon,
                            UiTarget target);
OracleProblem build_problem(const MultinomialSystemSpec& spec, double epsilon,
                            UiTarget target);

}  // namespace pidd

#endif  // PIDD_ORACLE_HPP
