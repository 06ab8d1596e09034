#include "pidd/systems.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pidd/index_tuples.hpp"

namespace pidd {

void ScalarMPmf::validate() const {
  require(!support.empty(), "ScalarMPmf: empty support");
  require(support.size() == probs.size(), "ScalarMPmf: support/probs size mismatch");
  std::set<double> seen(support.begin(), support.end());
  require(seen.size() == support.size(), "ScalarMPmf: duplicate support values");
  KahanSum s;
  for (double p : probs) {
    require(p >= 0.0, "ScalarMPmf: negative probability");
    s.add(p);
  }
  require(std::abs(s.value() - 1.0) <= 1e-12, "ScalarMPmf: probabilities do not sum to 1");
}

namespace {

size_t expected_gamma_count(int d, int d_prime) {
  size_t n = 0;
  for (int j = 1; j <= d_prime; ++j) n += enum_index_tuples(d, j).size();
  return n;
}

std::vector<double> gamma_from_map(int d, int d_prime,
                                   const std::map<IndexTuple, double>& gamma) {
  std::vector<double> out;
  for (int j = 1; j <= d_prime; ++j) {
    for (const auto& t : enum_index_tuples(d, j)) {
      auto it = gamma.find(t);
      require(it != gamma.end(), "PoissonSystemSpec: missing gamma for an index tuple");
      out.push_back(it->second);
    }
  }
  require(gamma.size() == out.size(),
          "PoissonSystemSpec: extra gamma entries outside the tuple sets");
  return out;
}

}  // namespace

void PoissonSystemSpec::validate() const {
  m_pmf.validate();
  for (double m : m_pmf.support) {
    // The posterior construction needs P(M <= 0) == 0.
    require(m > 0.0, "PoissonSystemSpec: M support must be strictly positive");
  }
  require(d1 >= 1 && d1_prime >= 1 && d1_prime <= d1, "PoissonSystemSpec: bad (d1, d1')");
  require(d2 >= 1 && d2_prime >= 1 && d2_prime <= d2, "PoissonSystemSpec: bad (d2, d2')");
  require(gamma_y.size() == expected_gamma_count(d1, d1_prime),
          "PoissonSystemSpec: gamma_y has the wrong number of entries");
  require(gamma_z.size() == expected_gamma_count(d2, d2_prime),
          "PoissonSystemSpec: gamma_z has the wrong number of entries");
  for (double g : gamma_y) require(g > 0.0, "PoissonSystemSpec: gamma_y entries must be positive");
  for (double g : gamma_z) require(g > 0.0, "PoissonSystemSpec: gamma_z entries must be positive");
}

PoissonSystemSpec make_poisson_spec(ScalarMPmf m_pmf, int d1, int d1_prime, int d2,
                                    int d2_prime,
                                    const std::map<IndexTuple, double>& gamma_y,
                                    const std::map<IndexTuple, double>& gamma_z) {
  PoissonSystemSpec spec;
  spec.m_pmf = std::move(m_pmf);
  spec.d1 = d1;
  spec.d1_prime = d1_prime;
  spec.d2 = d2;
  spec.d2_prime = d2_prime;
  spec.gamma_y = gamma_from_map(d1, d1_prime, gamma_y);
  spec.gamma_z = gamma_from_map(d2, d2_prime, gamma_z);
  spec.validate();
  return spec;
}

void MultinomialSystemSpec::validate() const {
  m_pmf.validate();
  for (double m : m_pmf.support) {
    require(m >= 0.0 && m == std::floor(m),
            "MultinomialSystemSpec: M support must be nonnegative integers");
  }
  for (const auto* p : {&p_y, &p_z}) {
    require(!p->empty(), "MultinomialSystemSpec: empty thinning vector");
    KahanSum s;
    for (double v : *p) {
      require(v > 0.0, "MultinomialSystemSpec: thinning probabilities must be positive");
      s.add(v);
    }
    require(std::abs(s.value() - 1.0) <= 1e-12,
            "MultinomialSystemSpec: thinning probabilities do not sum to 1");
  }
}

Point to_point(const CountVec& v) {
  Point p(v.size());
  for (size_t i = 0; i < v.size(); ++i) p[i] = static_cast<double>(v[i]);
  return p;
}

double JointPmf::total_mass() const {
  KahanSum s;
  for (double p : table) s.add(p);
  return s.value();
}

void JointPmf::validate(double atol) const {
  size_t cells_expected = 1;
  for (const auto& ax : axes) cells_expected *= ax.points.size();
  require(table.size() == cells_expected, "JointPmf: table size mismatch");
  for (double p : table) require(p >= 0.0, "JointPmf: negative probability");
  require(tail_mass >= 0.0, "JointPmf: negative tail mass");
  require(std::abs(total_mass() + tail_mass - 1.0) <= atol,
          "JointPmf: mass does not account to 1");
}

JointPmf JointPmf::marginal(const std::vector<size_t>& keep) const {
  require(!keep.empty(), "JointPmf::marginal: must keep at least one axis");
  require(std::is_sorted(keep.begin(), keep.end()), "JointPmf::marginal: keep must be sorted");
  for (size_t a : keep) require(a < axes.size(), "JointPmf::marginal: axis out of range");

  JointPmf out;
  size_t out_cells = 1;
  for (size_t a : keep) {
    out.axes.push_back(axes[a]);
    out_cells *= axes[a].points.size();
  }
  out.table.assign(out_cells, 0.0);
  out.tail_mass = tail_mass;

  std::vector<size_t> dims(axes.size());
  for (size_t a = 0; a < axes.size(); ++a) dims[a] = axes[a].points.size();

  std::vector<size_t> idx(axes.size(), 0);
  for (size_t flat = 0; flat < table.size(); ++flat) {
    size_t out_flat = 0;
    for (size_t a : keep) out_flat = out_flat * dims[a] + idx[a];
    out.table[out_flat] += table[flat];
    for (size_t a = axes.size(); a-- > 0;) {
      if (++idx[a] < dims[a]) break;
      idx[a] = 0;
    }
  }
  return out;
}

std::vector<double> JointPmf::axis_marginal(size_t a) const {
  JointPmf m = marginal({a});
  return m.table;
}

MvPoissonParams poisson_conditional_params(const PoissonSystemSpec& spec, Side side,
                                           double m) {
  require(m > 0.0, "poisson_conditional: m must be positive");
  const int d = spec.dim(side);
  const int dp = spec.order(side);
  const auto& gamma = spec.gamma(side);
  MvPoissonParams params;
  params.d = d;
  params.d_prime = dp;
  params.rates.reserve(gamma.size());
  size_t col = 0;
  for (int j = 1; j <= dp; ++j) {
    const size_t block = enum_index_tuples(d, j).size();
    const double mj = std::pow(m, j);
    for (size_t t = 0; t < block; ++t) params.rates.push_back(gamma[col++] * mj);
  }
  return params;
}

FinitePmf poisson_conditional(const PoissonSystemSpec& spec, Side side, double m,
                              double epsilon) {
  return truncated_support(poisson_conditional_params(spec, side, m), epsilon);
}

FinitePmf multinomial_conditional(const MultinomialSystemSpec& spec, Side side, int m) {
  require(m >= 0, "multinomial_conditional: m must be nonnegative");
  const auto& p = spec.p(side);
  FinitePmf pmf;
  pmf.support = enumerate_compositions(m, static_cast<int>(p.size()));
  pmf.probs.reserve(pmf.support.size());
  for (const auto& k : pmf.support) pmf.probs.push_back(multinomial_pmf(m, p, k));
  pmf.tail_mass = 0.0;
  return pmf;
}

ConditionalFamily conditional_family(const PoissonSystemSpec& spec, Side side,
                                     double epsilon) {
  spec.validate();
  ConditionalFamily fam;
  int k_max = 0;
  for (double m : spec.m_pmf.support) {
    k_max = std::max(k_max, poisson_box_cap(poisson_conditional_params(spec, side, m), epsilon));
  }
  bool first = true;
  for (double m : spec.m_pmf.support) {
    FinitePmf pmf = poisson_box_pmf(poisson_conditional_params(spec, side, m), k_max);
    if (first) {
      fam.support = pmf.support;
      first = false;
    }
    fam.rows.push_back(std::move(pmf.probs));
    fam.row_tail.push_back(pmf.tail_mass);
  }
  return fam;
}

ConditionalFamily conditional_family(const MultinomialSystemSpec& spec, Side side) {
  spec.validate();
  ConditionalFamily fam;
  const int parts = static_cast<int>(spec.p(side).size());
  std::vector<double> ms = spec.m_pmf.support;
  std::sort(ms.begin(), ms.end());
  for (double md : ms) {
    for (auto& v : enumerate_compositions(static_cast<int>(md), parts)) {
      fam.support.push_back(std::move(v));
    }
  }
  for (double md : spec.m_pmf.support) {
    const int m = static_cast<int>(md);
    std::vector<double> row(fam.support.size(), 0.0);
    for (size_t i = 0; i < fam.support.size(); ++i) {
      long long s = 0;
      for (int v : fam.support[i]) s += v;
      if (s == m) row[i] = multinomial_pmf(m, spec.p(side), fam.support[i]);
    }
    fam.rows.push_back(std::move(row));
    fam.row_tail.push_back(0.0);
  }
  return fam;
}

namespace {

const char* side_name(Side s) { return s == Side::Y ? "Y" : "Z"; }

JointPmf pairwise_from_family(const ScalarMPmf& m_pmf, Side side,
                              const ConditionalFamily& fam) {
  JointPmf joint;
  Axis m_axis{"M", {}};
  for (double m : m_pmf.support) m_axis.points.push_back({m});
  Axis v_axis{side_name(side), {}};
  for (const auto& v : fam.support) v_axis.points.push_back(to_point(v));
  joint.axes = {std::move(m_axis), std::move(v_axis)};
  joint.table.assign(m_pmf.support.size() * fam.support.size(), 0.0);
  double tail = 0.0;
  for (size_t mi = 0; mi < m_pmf.support.size(); ++mi) {
    const double pm = m_pmf.probs[mi];
    tail += pm * fam.row_tail[mi];
    for (size_t vi = 0; vi < fam.support.size(); ++vi) {
      joint.table[mi * fam.support.size() + vi] = pm * fam.rows[mi][vi];
    }
  }
  joint.tail_mass = tail;
  return joint;
}

JointPmf full_joint_from_families(const ScalarMPmf& m_pmf, const ConditionalFamily& fy,
                                  const ConditionalFamily& fz) {
  JointPmf joint;
  Axis m_axis{"M", {}};
  for (double m : m_pmf.support) m_axis.points.push_back({m});
  Axis y_axis{"Y", {}};
  for (const auto& v : fy.support) y_axis.points.push_back(to_point(v));
  Axis z_axis{"Z", {}};
  for (const auto& v : fz.support) z_axis.points.push_back(to_point(v));
  joint.axes = {std::move(m_axis), std::move(y_axis), std::move(z_axis)};

  const size_t ny = fy.support.size();
  const size_t nz = fz.support.size();
  joint.table.assign(m_pmf.support.size() * ny * nz, 0.0);
  double tail = 0.0;
  for (size_t mi = 0; mi < m_pmf.support.size(); ++mi) {
    const double pm = m_pmf.probs[mi];
    const double ty = fy.row_tail[mi];
    const double tz = fz.row_tail[mi];
    tail += pm * (ty + tz - ty * tz);
    for (size_t yi = 0; yi < ny; ++yi) {
      const double py = fy.rows[mi][yi];
      if (py == 0.0) continue;
      double* dest = &joint.table[(mi * ny + yi) * nz];
      for (size_t zi = 0; zi < nz; ++zi) dest[zi] = pm * py * fz.rows[mi][zi];
    }
  }
  joint.tail_mass = tail;
  return joint;
}

}  // namespace

JointPmf pairwise_joint(const PoissonSystemSpec& spec, Side side, double epsilon) {
  return pairwise_from_family(spec.m_pmf, side, conditional_family(spec, side, epsilon));
}

JointPmf pairwise_joint(const MultinomialSystemSpec& spec, Side side) {
  return pairwise_from_family(spec.m_pmf, side, conditional_family(spec, side));
}

JointPmf full_joint_conditionally_independent(const PoissonSystemSpec& spec,
                                              double epsilon) {
  return full_joint_from_families(spec.m_pmf, conditional_family(spec, Side::Y, epsilon),
                                  conditional_family(spec, Side::Z, epsilon));
}

JointPmf full_joint_conditionally_independent(const MultinomialSystemSpec& spec) {
  return full_joint_from_families(spec.m_pmf, conditional_family(spec, Side::Y),
                                  conditional_family(spec, Side::Z));
}

}  // namespace pidd
