#include "pidd/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "pidd/information.hpp"

namespace pidd {

void OracleProblem::validate(double m_marginal_atol) const {
  (void)m_marginal_atol;
  const size_t nm = m_probs.size();
  require(nm > 0 && m_support.size() == nm, "OracleProblem: bad M axis");
  require(y_given_m.size() == nm && z_given_m.size() == nm,
          "OracleProblem: conditional row count mismatch");
  KahanSum pm_sum;
  for (double p : m_probs) {
    require(p >= 0.0, "OracleProblem: negative P(m)");
    pm_sum.add(p);
  }
  require(std::abs(pm_sum.value() - 1.0) <= 1e-10, "OracleProblem: P(m) does not sum to 1");
  for (size_t mi = 0; mi < nm; ++mi) {
    require(y_given_m[mi].size() == y_support.size(), "OracleProblem: Y row size mismatch");
    require(z_given_m[mi].size() == z_support.size(), "OracleProblem: Z row size mismatch");
    if (m_probs[mi] == 0.0) continue;
    KahanSum ys, zs;
    for (double p : y_given_m[mi]) {
      require(p >= 0.0, "OracleProblem: negative P(y|m)");
      ys.add(p);
    }
    for (double p : z_given_m[mi]) {
      require(p >= 0.0, "OracleProblem: negative P(z|m)");
      zs.add(p);
    }
    require(std::abs(ys.value() - 1.0) <= 1e-9, "OracleProblem: P(y|m) does not sum to 1");
    require(std::abs(zs.value() - 1.0) <= 1e-9, "OracleProblem: P(z|m) does not sum to 1");
  }
}

OracleProblem make_oracle_problem(const JointPmf& joint_my, const JointPmf& joint_mz,
                                  UiTarget target, double m_marginal_atol) {
  require(joint_my.axes.size() == 2 && joint_mz.axes.size() == 2,
          "make_oracle_problem: expected pairwise joints");
  require(joint_my.axes[0].points == joint_mz.axes[0].points,
          "make_oracle_problem: M supports differ");

  const auto pm_y = joint_my.axis_marginal(0);
  const auto pm_z = joint_mz.axis_marginal(0);
  for (size_t i = 0; i < pm_y.size(); ++i) {
    if (std::abs(pm_y[i] - pm_z[i]) > m_marginal_atol) {
      throw std::invalid_argument(
          "make_oracle_problem: pairwise marginals disagree on P(M); the feasible set "
          "is empty");
    }
  }

  OracleProblem prob;
  prob.target = target;
  const size_t nm = joint_my.axes[0].points.size();
  const size_t ny = joint_my.axes[1].points.size();
  const size_t nz = joint_mz.axes[1].points.size();
  prob.m_support.reserve(nm);
  for (const auto& p : joint_my.axes[0].points) prob.m_support.push_back(p.at(0));
  for (const auto& p : joint_my.axes[1].points) {
    CountVec v(p.size());
    for (size_t i = 0; i < p.size(); ++i) v[i] = static_cast<int>(std::llround(p[i]));
    prob.y_support.push_back(std::move(v));
  }
  for (const auto& p : joint_mz.axes[1].points) {
    CountVec v(p.size());
    for (size_t i = 0; i < p.size(); ++i) v[i] = static_cast<int>(std::llround(p[i]));
    prob.z_support.push_back(std::move(v));
  }

  // Shared P(m) plus conditional rows normalized per m (a truncated side is
  // conditioned on its included support).
  prob.m_probs.resize(nm);
  for (size_t mi = 0; mi < nm; ++mi) prob.m_probs[mi] = 0.5 * (pm_y[mi] + pm_z[mi]);
  KahanSum total;
  for (double p : prob.m_probs) total.add(p);
  for (double& p : prob.m_probs) p /= total.value();

  for (size_t mi = 0; mi < nm; ++mi) {
    std::vector<double> yrow(ny), zrow(nz);
    KahanSum ys, zs;
    for (size_t yi = 0; yi < ny; ++yi) {
      yrow[yi] = joint_my.table[mi * ny + yi];
      ys.add(yrow[yi]);
    }
    for (size_t zi = 0; zi < nz; ++zi) {
      zrow[zi] = joint_mz.table[mi * nz + zi];
      zs.add(zrow[zi]);
    }
    if (prob.m_probs[mi] > 0.0) {
      require(ys.value() > 0.0 && zs.value() > 0.0,
              "make_oracle_problem: empty conditional row");
      for (double& v : yrow) v /= ys.value();
      for (double& v : zrow) v /= zs.value();
    }
    prob.y_given_m.push_back(std::move(yrow));
    prob.z_given_m.push_back(std::move(zrow));
  }
  prob.validate(m_marginal_atol);
  return prob;
}

namespace {

OracleProblem swapped(const OracleProblem& p) {
  OracleProblem s;
  s.m_support = p.m_support;
  s.y_support = p.z_support;
  s.z_support = p.y_support;
  s.m_probs = p.m_probs;
  s.y_given_m = p.z_given_m;
  s.z_given_m = p.y_given_m;
  s.target = UiTarget::ZGivenY;
  return s;
}

const double kInvLog2 = 1.0 / std::log(2.0);

// Entries whose row or column marginal vanishes are zero in every feasible
// coupling; all work happens on the active submatrix.
struct ActiveBlock {
  std::vector<size_t> rows;
  std::vector<size_t> cols;
  std::vector<double> row_target;
  std::vector<double> col_target;
};

struct Workspace {
  size_t nm = 0, ny = 0, nz = 0;
  const std::vector<double>* pm = nullptr;
  const std::vector<std::vector<double>>* py = nullptr;
  std::vector<double> q_y;  // fixed mixture marginal of Y
};

double objective(const Workspace& w, const std::vector<ActiveBlock>& blocks,
                 const std::vector<std::vector<double>>& t, std::vector<double>& q_yz) {
  std::fill(q_yz.begin(), q_yz.end(), 0.0);
  for (size_t m = 0; m < w.nm; ++m) {
    const double pm = (*w.pm)[m];
    if (pm == 0.0) continue;
    for (size_t i = 0; i < w.ny * w.nz; ++i) q_yz[i] += pm * t[m][i];
  }
  KahanSum acc;
  for (size_t m = 0; m < w.nm; ++m) {
    const double pm = (*w.pm)[m];
    if (pm == 0.0) continue;
    const ActiveBlock& blk = blocks[m];
    for (size_t r = 0; r < blk.rows.size(); ++r) {
      const size_t y = blk.rows[r];
      const double py = blk.row_target[r];
      for (size_t z : blk.cols) {
        const double v = t[m][y * w.nz + z];
        // den underflows only when v itself is denormal; the skipped term is
        // below machine resolution either way.
        const double den = py * q_yz[y * w.nz + z];
        if (v <= 0.0 || den <= 0.0) continue;
        acc.add(pm * v * std::log(v * w.q_y[y] / den));
      }
    }
  }
  return acc.value() * kInvLog2;
}

// Cyclic Bregman (KL) projections onto the two marginal affine sets: scale
// rows to their targets, then columns, until both match. Positivity is
// preserved automatically in this geometry.
void ipfp_project(std::vector<double>& t, size_t nz_full, const ActiveBlock& blk,
                  double tol, int max_sweeps) {
  const size_t nr = blk.rows.size();
  const size_t nc = blk.cols.size();
  if (nr == 0 || nc == 0) return;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (size_t r = 0; r < nr; ++r) {
      double* row = &t[blk.rows[r] * nz_full];
      double s = 0.0;
      for (size_t c = 0; c < nc; ++c) s += row[blk.cols[c]];
      const double scale = blk.row_target[r] / std::max(s, 1e-300);
      for (size_t c = 0; c < nc; ++c) row[blk.cols[c]] *= scale;
    }
    double worst = 0.0;
    for (size_t c = 0; c < nc; ++c) {
      const size_t z = blk.cols[c];
      double s = 0.0;
      for (size_t r = 0; r < nr; ++r) s += t[blk.rows[r] * nz_full + z];
      const double scale = blk.col_target[c] / std::max(s, 1e-300);
      for (size_t r = 0; r < nr; ++r) t[blk.rows[r] * nz_full + z] *= scale;
    }
    for (size_t r = 0; r < nr; ++r) {
      double s = 0.0;
      for (size_t c = 0; c < nc; ++c) s += t[blk.rows[r] * nz_full + blk.cols[c]];
      worst = std::max(worst, std::abs(s - blk.row_target[r]));
    }
    if (worst <= tol) return;
  }
}

double feasibility(const Workspace& w, const std::vector<ActiveBlock>& blocks,
                   const std::vector<std::vector<double>>& t,
                   const std::vector<std::vector<double>>& pz) {
  double worst = 0.0;
  for (size_t m = 0; m < w.nm; ++m) {
    if ((*w.pm)[m] == 0.0) continue;
    const ActiveBlock& blk = blocks[m];
    for (size_t r = 0; r < blk.rows.size(); ++r) {
      double s = 0.0;
      for (size_t c : blk.cols) s += t[m][blk.rows[r] * w.nz + c];
      worst = std::max(worst, std::abs(s - blk.row_target[r]));
    }
    for (size_t z = 0; z < w.nz; ++z) {
      double s = 0.0;
      for (size_t y = 0; y < w.ny; ++y) s += t[m][y * w.nz + z];
      worst = std::max(worst, std::abs(s - pz[m][z]));
    }
  }
  return worst;
}

}  // namespace

OracleSolution solve_ui(const OracleProblem& problem, const SolveOptions& options) {
  problem.validate();
  if (problem.target == UiTarget::YGivenZ) {
    OracleSolution sol = solve_ui(swapped(problem), options);
    // Transpose couplings back to the problem's (y, z) orientation.
    const size_t ny = problem.y_support.size();
    const size_t nz = problem.z_support.size();
    for (auto& block : sol.coupling) {
      std::vector<double> t(ny * nz);
      for (size_t y = 0; y < ny; ++y) {
        for (size_t z = 0; z < nz; ++z) t[y * nz + z] = block[z * ny + y];
      }
      block = std::move(t);
    }
    return sol;
  }
  if (problem.coupling_cells() > options.dense_cap) {
    throw std::invalid_argument("solve_ui: instance exceeds the dense cell cap");
  }

  Workspace w;
  w.nm = problem.m_probs.size();
  w.ny = problem.y_support.size();
  w.nz = problem.z_support.size();
  w.pm = &problem.m_probs;
  w.py = &problem.y_given_m;
  w.q_y.assign(w.ny, 0.0);
  for (size_t m = 0; m < w.nm; ++m) {
    for (size_t y = 0; y < w.ny; ++y) w.q_y[y] += problem.m_probs[m] * problem.y_given_m[m][y];
  }

  std::vector<ActiveBlock> blocks(w.nm);
  for (size_t m = 0; m < w.nm; ++m) {
    for (size_t y = 0; y < w.ny; ++y) {
      if (problem.y_given_m[m][y] > 0.0) {
        blocks[m].rows.push_back(y);
        blocks[m].row_target.push_back(problem.y_given_m[m][y]);
      }
    }
    for (size_t z = 0; z < w.nz; ++z) {
      if (problem.z_given_m[m][z] > 0.0) {
        blocks[m].cols.push_back(z);
        blocks[m].col_target.push_back(problem.z_given_m[m][z]);
      }
    }
  }

  // Conditionally independent start: always feasible, upper-bounds the value.
  std::vector<std::vector<double>> t(w.nm, std::vector<double>(w.ny * w.nz, 0.0));
  for (size_t m = 0; m < w.nm; ++m) {
    for (size_t y = 0; y < w.ny; ++y) {
      const double py = problem.y_given_m[m][y];
      if (py == 0.0) continue;
      for (size_t z = 0; z < w.nz; ++z) {
        t[m][y * w.nz + z] = py * problem.z_given_m[m][z];
      }
    }
  }

  const double proj_tol = std::min(options.tol_feasibility, 1e-12);
  std::vector<double> q_yz(w.ny * w.nz);

  OracleSolution sol;
  double f = objective(w, blocks, t, q_yz);
  sol.objective_initial = f;

  // Alternating divergence minimization: hold the induced mixture r(z|y)
  // fixed and KL-project the product P(y|m) r(z|y) back onto each coupling
  // polytope. Both half-steps are exact partial minimizations, so the
  // objective never increases.
  int small_decreases = 0;
  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    for (size_t m = 0; m < w.nm; ++m) {
      if (problem.m_probs[m] == 0.0) continue;
      const ActiveBlock& blk = blocks[m];
      for (size_t r = 0; r < blk.rows.size(); ++r) {
        const size_t y = blk.rows[r];
        const double py = blk.row_target[r];
        for (size_t z : blk.cols) {
          const size_t i = y * w.nz + z;
          t[m][i] = py * (q_yz[i] / w.q_y[y]);
        }
      }
      ipfp_project(t[m], w.nz, blk, proj_tol, 2000);
    }
    const double f_new = objective(w, blocks, t, q_yz);
    if (!std::isfinite(f_new)) break;
    const double decrease = f - f_new;
    f = f_new;
    if (decrease < options.tol_objective) {
      if (++small_decreases >= 3) {
        ++iter;
        break;
      }
    } else {
      small_decreases = 0;
    }
  }

  sol.iterations = iter;
  sol.feasibility_violation = feasibility(w, blocks, t, problem.z_given_m);
  sol.ui_value = f;
  if (sol.ui_value < 0.0 && sol.ui_value >= -1e-12) sol.ui_value = 0.0;
  sol.converged =
      small_decreases >= 3 && sol.feasibility_violation <= options.tol_feasibility;
  sol.coupling = std::move(t);
  return sol;
}

namespace {

void check_truncation(const JointPmf& pair, double epsilon, const char* side) {
  const double tail = pair.tail_mass;
  if (tail > 10.0 * epsilon) {
    throw std::invalid_argument(std::string("build_problem: ") + side +
                                " side truncation exceeds the requested epsilon band");
  }
}

}  // namespace

OracleProblem build_problem(const PoissonSystemSpec& spec, double epsilon, UiTarget target) {
  const JointPmf pair_y = pairwise_joint(spec, Side::Y, epsilon);
  const JointPmf pair_z = pairwise_joint(spec, Side::Z, epsilon);
  check_truncation(pair_y, epsilon, "Y");
  check_truncation(pair_z, epsilon, "Z");
  return make_oracle_problem(pair_y, pair_z, target);
}

OracleProblem build_problem(const MultinomialSystemSpec& spec, double epsilon,
                            UiTarget target) {
  (void)epsilon;  // exact supports, no truncation band to enforce
  return make_oracle_problem(pairwise_joint(spec, Side::Y), pairwise_joint(spec, Side::Z),
                             target);
}

}  // namespace pidd
