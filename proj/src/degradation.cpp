#include "pidd/degradation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "pidd/conditions.hpp"
#include "pidd/information.hpp"
#include "pidd/parallel.hpp"

namespace pidd {

void Channel::validate(double row_atol) const {
  require(input_support.size() == rows.size(), "Channel: rows/input size mismatch");
  std::unordered_map<CountVec, size_t, CountVecHash> out_index;
  for (size_t i = 0; i < output_support.size(); ++i) out_index.emplace(output_support[i], i);
  for (const auto& row : rows) {
    for (double p : row.probs) require(p >= 0.0, "Channel: negative row probability");
    require(std::abs(row.total_mass() + row.tail_mass - 1.0) <= row_atol,
            "Channel: row mass does not account to 1");
    for (const auto& z : row.support) {
      require(out_index.count(z) > 0, "Channel: row support outside output support");
    }
  }
}

FinitePmf generator_posterior(const MvPoissonParams& params, const CountVec& y) {
  require(static_cast<int>(y.size()) == params.d, "generator_posterior: dimension mismatch");
  for (int v : y) require(v >= 0, "generator_posterior: negative observation entry");

  const AMatrix a = build_a_matrix(params.d, params.d_prime);
  const int n_gen = params.n_generators();

  // Fibre {kg >= 0 : y == A kg}: choose the order >= 2 counts, the base block
  // is then forced to the remaining budget.
  std::vector<CountVec> support;
  std::vector<double> log_probs;
  CountVec budget = y;
  CountVec kg(n_gen, 0);
  auto rec = [&](auto&& self, int col, double partial) -> void {
    if (col == n_gen) {
      CountVec full = kg;
      double lp = partial;
      for (int i = 0; i < params.d; ++i) {
        full[i] = budget[i];
        lp += scalar_poisson_log_pmf(params.rates[i], budget[i]);
      }
      support.push_back(std::move(full));
      log_probs.push_back(lp);
      return;
    }
    const auto& tuple = a.column_index[col];
    int cap = budget[tuple[0] - 1];
    for (int i : tuple) cap = std::min(cap, budget[i - 1]);
    if (params.rates[col] == 0.0) cap = 0;
    for (int c = 0; c <= cap; ++c) {
      kg[col] = c;
      self(self, col + 1, partial + scalar_poisson_log_pmf(params.rates[col], c));
      for (int i : tuple) budget[i - 1] -= 1;
    }
    kg[col] = 0;
    for (int i : tuple) budget[i - 1] += cap + 1;
  };
  rec(rec, params.d, 0.0);

  double mx = kNegInf;
  for (double lp : log_probs) mx = std::max(mx, lp);
  if (mx == kNegInf) {
    throw NumericalIntegrityError("generator_posterior: observation has zero probability");
  }
  FinitePmf pmf;
  KahanSum total;
  std::vector<double> w(log_probs.size());
  for (size_t i = 0; i < log_probs.size(); ++i) {
    w[i] = log_probs[i] == kNegInf ? 0.0 : std::exp(log_probs[i] - mx);
    total.add(w[i]);
  }
  pmf.probs.resize(w.size());
  for (size_t i = 0; i < w.size(); ++i) pmf.probs[i] = w[i] / total.value();
  pmf.support = std::move(support);
  pmf.tail_mass = 0.0;
  return pmf;
}

namespace {

struct OrderLayout {
  std::vector<size_t> offset;  // first column of each order block (1-based order)
  std::vector<size_t> size;
};

OrderLayout order_layout(int d, int d_prime) {
  OrderLayout lay;
  lay.offset.resize(d_prime + 1, 0);
  lay.size.resize(d_prime + 1, 0);
  size_t col = 0;
  for (int j = 1; j <= d_prime; ++j) {
    lay.offset[j] = col;
    lay.size[j] = enum_index_tuples(d, j).size();
    col += lay.size[j];
  }
  return lay;
}

// Per-order thinning data: class probabilities over the Z tuples of order j
// plus the surplus class.
struct ThinningPlan {
  int z_orders = 0;                       // d2'
  std::vector<std::vector<double>> probs;  // [j-1] -> c_j + 1 entries
  OrderLayout y_layout;
  OrderLayout z_layout;
  size_t z_gen_count = 0;
};

ThinningPlan make_thinning_plan(const PoissonSystemSpec& spec) {
  ThinningPlan plan;
  plan.z_orders = spec.d2_prime;
  plan.y_layout = order_layout(spec.d1, spec.d1_prime);
  plan.z_layout = order_layout(spec.d2, spec.d2_prime);
  for (int j = 1; j <= spec.d2_prime; ++j) {
    if (j > spec.d1_prime) {
      throw ConstructionInfeasibleError(
          "generator_thinning: Z truncation order exceeds Y truncation order");
    }
    KahanSum y_sum;
    for (size_t t = 0; t < plan.y_layout.size[j]; ++t) {
      y_sum.add(spec.gamma_y[plan.y_layout.offset[j] + t]);
    }
    std::vector<double> p;
    KahanSum z_sum;
    for (size_t t = 0; t < plan.z_layout.size[j]; ++t) {
      const double g = spec.gamma_z[plan.z_layout.offset[j] + t];
      z_sum.add(g);
      p.push_back(g / y_sum.value());
    }
    const double surplus = 1.0 - z_sum.value() / y_sum.value();
    if (surplus < 0.0) {
      throw ConstructionInfeasibleError(
          "generator_thinning: SNR condition violated at order " + std::to_string(j));
    }
    p.push_back(surplus);
    plan.probs.push_back(std::move(p));
    plan.z_gen_count += plan.z_layout.size[j];
  }
  return plan;
}

// Distribution over Z generator vectors given the per-order Y generator
// totals; the product of the per-order multinomials.
std::vector<std::pair<CountVec, double>> thinning_row(const ThinningPlan& plan,
                                                      const std::vector<int>& order_totals) {
  std::vector<std::pair<CountVec, double>> out;
  CountVec zg(plan.z_gen_count, 0);
  auto rec = [&](auto&& self, int j, double prob) -> void {
    if (j > plan.z_orders) {
      out.emplace_back(zg, prob);
      return;
    }
    const int n_trials = order_totals[j - 1];
    const auto& p = plan.probs[j - 1];
    const int classes = static_cast<int>(p.size());
    for (const auto& w : enumerate_compositions(n_trials, classes)) {
      const double q = multinomial_pmf(n_trials, p, w);
      if (q == 0.0) continue;
      for (int t = 0; t < classes - 1; ++t) zg[plan.z_layout.offset[j] + t] = w[t];
      self(self, j + 1, prob * q);
    }
    for (size_t t = 0; t < plan.z_layout.size[j]; ++t) zg[plan.z_layout.offset[j] + t] = 0;
  };
  rec(rec, 1, 1.0);
  return out;
}

std::vector<int> y_order_totals(const ThinningPlan& plan, const CountVec& yg, int d1_prime) {
  std::vector<int> totals(plan.z_orders, 0);
  for (int j = 1; j <= std::min(plan.z_orders, d1_prime); ++j) {
    int s = 0;
    for (size_t t = 0; t < plan.y_layout.size[j]; ++t) {
      s += yg[plan.y_layout.offset[j] + t];
    }
    totals[j - 1] = s;
  }
  return totals;
}

std::vector<CountVec> sorted_union(std::vector<CountVec> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

Channel generator_thinning(const PoissonSystemSpec& spec,
                           const std::vector<CountVec>& inputs) {
  spec.validate();
  const ThinningPlan plan = make_thinning_plan(spec);
  const size_t y_gen_count = spec.gamma_y.size();

  Channel ch;
  ch.input_support = inputs;
  ch.rows.resize(inputs.size());
  std::vector<CountVec> outputs;
  for (size_t i = 0; i < inputs.size(); ++i) {
    require(inputs[i].size() == y_gen_count, "generator_thinning: input dimension mismatch");
    const auto totals = y_order_totals(plan, inputs[i], spec.d1_prime);
    FinitePmf row;
    for (auto& [zg, q] : thinning_row(plan, totals)) {
      row.support.push_back(zg);
      row.probs.push_back(q);
      outputs.push_back(std::move(zg));
    }
    ch.rows[i] = std::move(row);
  }
  ch.output_support = sorted_union(std::move(outputs));
  return ch;
}

Channel aggregate(const AMatrix& a_matrix, const std::vector<CountVec>& inputs) {
  Channel ch;
  ch.input_support = inputs;
  ch.rows.resize(inputs.size());
  std::vector<CountVec> outputs;
  for (size_t i = 0; i < inputs.size(); ++i) {
    CountVec z = a_matrix.apply(inputs[i]);
    ch.rows[i].support.push_back(z);
    ch.rows[i].probs.push_back(1.0);
    outputs.push_back(std::move(z));
  }
  ch.output_support = sorted_union(std::move(outputs));
  return ch;
}

Channel poisson_degradation_channel(const PoissonSystemSpec& spec, double epsilon) {
  const ConditionReport report = check_poisson(spec);
  if (report.direction != Direction::UiZZero && report.direction != Direction::Both) {
    throw ConstructionInfeasibleError(
        "poisson_degradation_channel: sufficient conditions do not hold for Y over Z");
  }
  const ThinningPlan plan = make_thinning_plan(spec);
  const AMatrix a_z = build_a_matrix(spec.d2, spec.d2_prime);

  int k_max = 0;
  for (double m : spec.m_pmf.support) {
    k_max = std::max(k_max,
                     poisson_box_cap(poisson_conditional_params(spec, Side::Y, m), epsilon));
  }
  // Any fixed positive m gives the same posterior; unit m makes the rates the
  // gammas themselves.
  const MvPoissonParams post_params = poisson_conditional_params(spec, Side::Y, 1.0);

  Channel ch;
  ch.input_support = enumerate_box(spec.d1, k_max);
  ch.rows.resize(ch.input_support.size());

  // Thinned-and-aggregated rows depend on yg only through its per-order
  // totals; cache them.
  std::map<std::vector<int>, std::vector<std::pair<CountVec, double>>> cache;
  std::mutex cache_mutex;
  auto thinned_aggregated = [&](const std::vector<int>& totals)
      -> const std::vector<std::pair<CountVec, double>>& {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(totals);
    if (it == cache.end()) {
      std::map<CountVec, double> acc;
      for (const auto& [zg, q] : thinning_row(plan, totals)) {
        acc[a_z.apply(zg)] += q;
      }
      std::vector<std::pair<CountVec, double>> flat(acc.begin(), acc.end());
      it = cache.emplace(totals, std::move(flat)).first;
    }
    return it->second;
  };

  parallel_for(ch.input_support.size(), [&](size_t i) {
    const FinitePmf post = generator_posterior(post_params, ch.input_support[i]);
    std::map<CountVec, double> acc;
    for (size_t g = 0; g < post.support.size(); ++g) {
      const auto totals = y_order_totals(plan, post.support[g], spec.d1_prime);
      for (const auto& [z, q] : thinned_aggregated(totals)) {
        acc[z] += post.probs[g] * q;
      }
    }
    FinitePmf row;
    row.support.reserve(acc.size());
    row.probs.reserve(acc.size());
    for (auto& [z, p] : acc) {
      row.support.push_back(z);
      row.probs.push_back(p);
    }
    ch.rows[i] = std::move(row);
  });

  std::vector<CountVec> outputs;
  for (const auto& row : ch.rows) {
    outputs.insert(outputs.end(), row.support.begin(), row.support.end());
  }
  ch.output_support = sorted_union(std::move(outputs));
  return ch;
}

Channel multinomial_degradation_channel(const MultinomialSystemSpec& spec) {
  const ConditionReport report = check_multinomial(spec);
  if (report.direction != Direction::UiZZero && report.direction != Direction::Both) {
    throw ConstructionInfeasibleError(
        "multinomial_degradation_channel: min p_z < min p_y, construction infeasible");
  }
  const int s_y = static_cast<int>(spec.p_y.size());
  const int s_z = static_cast<int>(spec.p_z.size());

  // Exclude the lowest index attaining min p_y; ties break to that index.
  const int excluded = static_cast<int>(
      std::min_element(spec.p_y.begin(), spec.p_y.end()) - spec.p_y.begin());
  KahanSum kept_sum;
  for (int i = 0; i < s_y; ++i) {
    if (i != excluded) kept_sum.add(spec.p_y[i]);
  }
  const double s = kept_sum.value();

  std::vector<double> p_star(s_z);
  KahanSum lead;
  for (int i = 0; i + 1 < s_z; ++i) {
    p_star[i] = spec.p_z[i] / s;
    lead.add(spec.p_z[i]);
  }
  p_star[s_z - 1] = 1.0 - lead.value() / s;
  for (double p : p_star) {
    if (p < -1e-15 || p > 1.0 + 1e-15) {
      throw ConstructionInfeasibleError(
          "multinomial_degradation_channel: thinned class probability outside [0,1]");
    }
  }
  for (double& p : p_star) p = std::clamp(p, 0.0, 1.0);

  Channel ch;
  std::vector<double> ms = spec.m_pmf.support;
  std::sort(ms.begin(), ms.end());
  for (double md : ms) {
    for (auto& y : enumerate_compositions(static_cast<int>(md), s_y)) {
      ch.input_support.push_back(std::move(y));
    }
  }

  std::vector<CountVec> outputs;
  ch.rows.resize(ch.input_support.size());
  for (size_t i = 0; i < ch.input_support.size(); ++i) {
    const CountVec& y = ch.input_support[i];
    int m = 0;
    for (int v : y) m += v;
    int n_kept = 0;
    for (int c = 0; c < s_y; ++c) {
      if (c != excluded) n_kept += y[c];
    }
    FinitePmf row;
    for (const auto& w : enumerate_compositions(n_kept, s_z)) {
      const double q = multinomial_pmf(n_kept, p_star, w);
      if (q == 0.0) continue;
      // The last Z class takes the slack so the output always has m trials.
      CountVec z(w.begin(), w.end());
      int lead_counts = 0;
      for (int c = 0; c + 1 < s_z; ++c) lead_counts += w[c];
      z[s_z - 1] = m - lead_counts;
      row.support.push_back(z);
      row.probs.push_back(q);
      outputs.push_back(std::move(z));
    }
    ch.rows[i] = std::move(row);
  }
  ch.output_support = sorted_union(std::move(outputs));
  return ch;
}

FinitePmf compound_multinomial_marginal(int n, const std::vector<double>& p,
                                        const std::vector<double>& q,
                                        const std::vector<int>& index_set) {
  require(n >= 0, "compound_multinomial_marginal: negative trial count");
  KahanSum psum;
  for (double v : p) {
    require(v >= 0.0, "compound_multinomial_marginal: negative p entry");
    psum.add(v);
  }
  require(std::abs(psum.value() - 1.0) <= 1e-12,
          "compound_multinomial_marginal: p does not sum to 1");
  KahanSum qsum;
  for (double v : q) {
    require(v >= 0.0, "compound_multinomial_marginal: negative q entry");
    qsum.add(v);
  }
  require(std::abs(qsum.value() - 1.0) <= 1e-12,
          "compound_multinomial_marginal: q does not sum to 1");
  std::vector<bool> seen(p.size(), false);
  KahanSum kept;
  for (int i : index_set) {
    require(i >= 1 && i <= static_cast<int>(p.size()),
            "compound_multinomial_marginal: index out of range");
    require(!seen[i - 1], "compound_multinomial_marginal: duplicate index");
    seen[i - 1] = true;
    kept.add(p[i - 1]);
  }
  const double ps = kept.value();
  const int k2 = static_cast<int>(q.size());

  std::vector<double> q_star(k2);
  KahanSum q_lead;
  for (int i = 0; i + 1 < k2; ++i) {
    q_star[i] = ps * q[i];
    q_lead.add(q[i]);
  }
  q_star[k2 - 1] = 1.0 - ps * q_lead.value();

  FinitePmf pmf;
  pmf.support = enumerate_compositions(n, k2);
  pmf.probs.reserve(pmf.support.size());
  for (const auto& z : pmf.support) pmf.probs.push_back(multinomial_pmf(n, q_star, z));
  pmf.tail_mass = 0.0;
  return pmf;
}

namespace {

DegradationCertificate verify_core(const ScalarMPmf& m_pmf, const ConditionalFamily& fy,
                                   const ConditionalFamily& fz, const Channel& channel,
                                   const VerifyTolerances& tol) {
  std::unordered_map<CountVec, size_t, CountVecHash> row_of;
  for (size_t i = 0; i < channel.input_support.size(); ++i) {
    row_of.emplace(channel.input_support[i], i);
  }
  for (size_t mi = 0; mi < m_pmf.support.size(); ++mi) {
    for (size_t yi = 0; yi < fy.support.size(); ++yi) {
      if (fy.rows[mi][yi] > 0.0 && row_of.count(fy.support[yi]) == 0) {
        throw std::invalid_argument(
            "verify_degradation: channel input support does not cover P(Y|m)");
      }
    }
  }
  std::unordered_map<CountVec, size_t, CountVecHash> z_of;
  for (size_t i = 0; i < fz.support.size(); ++i) z_of.emplace(fz.support[i], i);

  DegradationCertificate cert;
  cert.tv_tolerance = tol.tv;
  cert.mi_tolerance = tol.mi;

  // max over m of TV(channel o P(Y|m), P(Z|m)), including the mass each side
  // leaves outside the truncated supports.
  double max_tv = 0.0;
  for (size_t mi = 0; mi < m_pmf.support.size(); ++mi) {
    std::vector<double> composed(fz.support.size(), 0.0);
    double extra = 0.0;  // composed mass landing outside the Z support
    KahanSum composed_total;
    for (size_t yi = 0; yi < fy.support.size(); ++yi) {
      const double py = fy.rows[mi][yi];
      if (py == 0.0) continue;
      const FinitePmf& row = channel.rows[row_of.at(fy.support[yi])];
      for (size_t k = 0; k < row.support.size(); ++k) {
        const double q = py * row.probs[k];
        composed_total.add(q);
        auto it = z_of.find(row.support[k]);
        if (it == z_of.end()) {
          extra += q;
        } else {
          composed[it->second] += q;
        }
      }
    }
    KahanSum abs_diff;
    for (size_t zi = 0; zi < fz.support.size(); ++zi) {
      abs_diff.add(std::abs(composed[zi] - fz.rows[mi][zi]));
    }
    abs_diff.add(extra);
    const double q_tail = std::max(0.0, 1.0 - composed_total.value());
    abs_diff.add(std::abs(q_tail - fz.row_tail[mi]));
    max_tv = std::max(max_tv, 0.5 * abs_diff.value());
  }
  cert.max_tv = max_tv;

  // I(M;Z|Y) under P(m) P(y|m) row(y)(z), streamed row by row: each y slice
  // is a small (m x z) table whose conditional MI is weighted by Q(y).
  const size_t n_m = m_pmf.support.size();
  KahanSum cmi;
  KahanSum total_mass;
  std::vector<double> w(n_m);
  for (size_t yi = 0; yi < fy.support.size(); ++yi) {
    double qy = 0.0;
    bool any = false;
    for (size_t mi = 0; mi < n_m; ++mi) {
      w[mi] = m_pmf.probs[mi] * fy.rows[mi][yi];
      qy += w[mi];
      any = any || w[mi] > 0.0;
    }
    if (!any) continue;
    total_mass.add(qy);
    const FinitePmf& row = channel.rows[row_of.at(fy.support[yi])];
    for (size_t k = 0; k < row.support.size(); ++k) {
      const double qz = row.probs[k];
      if (qz == 0.0) continue;
      // p(z|y) recomputed as the m-sum so the factorization is not assumed.
      double pzy = 0.0;
      for (size_t mi = 0; mi < n_m; ++mi) pzy += w[mi] * qz;
      for (size_t mi = 0; mi < n_m; ++mi) {
        const double pmyz = w[mi] * qz;
        if (pmyz == 0.0) continue;
        cmi.add(pmyz * std::log(pmyz * qy / (w[mi] * pzy)));
      }
    }
  }
  cert.conditional_mi = clamp_information(
      cmi.value() / (total_mass.value() * std::log(2.0)), "certificate conditional MI");
  cert.pass = cert.max_tv <= cert.tv_tolerance && cert.conditional_mi <= cert.mi_tolerance;
  return cert;
}

}  // namespace

DegradationCertificate verify_degradation(const PoissonSystemSpec& spec,
                                          const Channel& channel, double epsilon,
                                          const VerifyTolerances& tol) {
  return verify_core(spec.m_pmf, conditional_family(spec, Side::Y, epsilon),
                     conditional_family(spec, Side::Z, epsilon), channel, tol);
}

DegradationCertificate verify_degradation(const MultinomialSystemSpec& spec,
                                          const Channel& channel, double epsilon,
                                          const VerifyTolerances& tol) {
  (void)epsilon;  // exact supports
  return verify_core(spec.m_pmf, conditional_family(spec, Side::Y),
                     conditional_family(spec, Side::Z), channel, tol);
}

namespace {

std::string format_point(const CountVec& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(v[i]);
  }
  return s;
}

CountVec parse_point(const std::string& s) {
  CountVec v;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ';')) v.push_back(std::stoi(part));
  require(!v.empty(), "channel csv: empty point");
  return v;
}

}  // namespace

void write_channel_csv(const Channel& channel, std::ostream& out) {
  out << "input,output,probability\n";
  char buf[64];
  for (size_t i = 0; i < channel.input_support.size(); ++i) {
    const auto& row = channel.rows[i];
    for (size_t k = 0; k < row.support.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", row.probs[k]);
      out << format_point(channel.input_support[i]) << ',' << format_point(row.support[k])
          << ',' << buf << '\n';
    }
  }
}

Channel read_channel_csv(std::istream& in) {
  Channel ch;
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "channel csv: empty file");
  require(line == "input,output,probability", "channel csv: bad header");
  std::unordered_map<CountVec, size_t, CountVecHash> row_of;
  std::vector<CountVec> outputs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string in_s, out_s, p_s;
    require(static_cast<bool>(std::getline(ss, in_s, ',')), "channel csv: bad line");
    require(static_cast<bool>(std::getline(ss, out_s, ',')), "channel csv: bad line");
    require(static_cast<bool>(std::getline(ss, p_s)), "channel csv: bad line");
    const CountVec input = parse_point(in_s);
    const CountVec output = parse_point(out_s);
    const double p = std::stod(p_s);
    auto [it, inserted] = row_of.emplace(input, ch.rows.size());
    if (inserted) {
      ch.input_support.push_back(input);
      ch.rows.emplace_back();
    }
    ch.rows[it->second].support.push_back(output);
    ch.rows[it->second].probs.push_back(p);
    outputs.push_back(output);
  }
  ch.output_support = sorted_union(std::move(outputs));
  return ch;
}

}  // namespace pidd
