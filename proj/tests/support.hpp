#ifndef PIDD_TESTS_SUPPORT_HPP
#define PIDD_TESTS_SUPPORT_HPP

#include <map>
#include <random>

#include "pidd/distributions.hpp"
#include "pidd/systems.hpp"

namespace pidd::testing {

inline MvPoissonParams random_params(std::mt19937& rng, int max_d = 4, int max_dp = 3,
                                     double lo = 1e-3, double hi = 3.0) {
  std::uniform_int_distribution<int> d_dist(1, max_d);
  const int d = d_dist(rng);
  std::uniform_int_distribution<int> dp_dist(1, std::min(d, max_dp));
  const int dp = dp_dist(rng);
  std::uniform_real_distribution<double> rate(lo, hi);
  std::map<IndexTuple, double> lambdas;
  for (int j = 1; j <= dp; ++j) {
    for (const auto& t : enum_index_tuples(d, j)) lambdas[t] = rate(rng);
  }
  return make_mv_poisson_params(d, dp, lambdas);
}

inline ScalarMPmf random_m_pmf(std::mt19937& rng, int size, double lo, double hi,
                               bool integer_support) {
  std::uniform_real_distribution<double> val(lo, hi);
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  ScalarMPmf pmf;
  if (integer_support) {
    std::vector<int> values;
    std::uniform_int_distribution<int> iv(static_cast<int>(lo), static_cast<int>(hi));
    while (static_cast<int>(values.size()) < size) {
      int v = iv(rng);
      if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
    }
    std::sort(values.begin(), values.end());
    for (int v : values) pmf.support.push_back(v);
  } else {
    std::vector<double> values;
    while (static_cast<int>(values.size()) < size) {
      double v = val(rng);
      if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
    }
    std::sort(values.begin(), values.end());
    pmf.support = values;
  }
  double total = 0.0;
  for (int i = 0; i < size; ++i) {
    pmf.probs.push_back(weight(rng));
    total += pmf.probs.back();
  }
  for (double& p : pmf.probs) p /= total;
  // Pin the rounding drift so the sum is 1 to the last ulp.
  double sum = 0.0;
  for (size_t i = 0; i + 1 < pmf.probs.size(); ++i) sum += pmf.probs[i];
  pmf.probs.back() = 1.0 - sum;
  return pmf;
}

// Random Poisson spec satisfying the Y-over-Z sufficient condition (small
// rates so truncated boxes stay desk sized).
inline PoissonSystemSpec random_feasible_poisson_spec(std::mt19937& rng, int max_d1 = 3,
                                                      int max_d2 = 2, int max_d1p = 2,
                                                      int m_points = 3) {
  std::uniform_int_distribution<int> d1_dist(1, max_d1);
  const int d1 = d1_dist(rng);
  std::uniform_int_distribution<int> d1p_dist(1, std::min(d1, max_d1p));
  const int d1p = d1p_dist(rng);
  std::uniform_int_distribution<int> d2_dist(1, max_d2);
  const int d2 = d2_dist(rng);
  std::uniform_int_distribution<int> d2p_dist(1, std::min({d2, d1p}));
  const int d2p = d2p_dist(rng);

  std::uniform_real_distribution<double> g(0.1, 0.5);
  std::map<IndexTuple, double> gy, gz;
  std::vector<double> y_order_sum(d1p, 0.0);
  for (int j = 1; j <= d1p; ++j) {
    for (const auto& t : enum_index_tuples(d1, j)) {
      gy[t] = g(rng);
      y_order_sum[j - 1] += gy[t];
    }
  }
  for (int j = 1; j <= d2p; ++j) {
    const auto tuples = enum_index_tuples(d2, j);
    // Scale the Z draws so the per-order sum lands strictly below the Y sum.
    std::vector<double> draws;
    double total = 0.0;
    for (size_t i = 0; i < tuples.size(); ++i) {
      draws.push_back(g(rng));
      total += draws.back();
    }
    std::uniform_real_distribution<double> frac(0.3, 0.95);
    const double scale = frac(rng) * y_order_sum[j - 1] / total;
    for (size_t i = 0; i < tuples.size(); ++i) gz[tuples[i]] = draws[i] * scale;
  }
  return make_poisson_spec(random_m_pmf(rng, m_points, 0.4, 1.4, false), d1, d1p, d2, d2p,
                           gy, gz);
}

inline MultinomialSystemSpec random_feasible_multinomial_spec(std::mt19937& rng,
                                                              int max_s = 4, int max_m = 6,
                                                              int m_points = 3) {
  std::uniform_int_distribution<int> s_dist(2, max_s);
  const int s_y = s_dist(rng);
  const int s_z = s_dist(rng);
  std::uniform_real_distribution<double> w(0.2, 1.0);
  auto draw_probs = [&](int s) {
    std::vector<double> p(s);
    double total = 0.0;
    for (double& v : p) {
      v = w(rng);
      total += v;
    }
    for (double& v : p) v /= total;
    double sum = 0.0;
    for (int i = 0; i + 1 < s; ++i) sum += p[i];
    p[s - 1] = 1.0 - sum;
    return p;
  };
  MultinomialSystemSpec spec;
  spec.p_y = draw_probs(s_y);
  spec.p_z = draw_probs(s_z);
  // Swap sides if needed so min p_z >= min p_y.
  const double min_y = *std::min_element(spec.p_y.begin(), spec.p_y.end());
  const double min_z = *std::min_element(spec.p_z.begin(), spec.p_z.end());
  if (min_z < min_y) std::swap(spec.p_y, spec.p_z);
  spec.m_pmf = random_m_pmf(rng, m_points, 0, max_m, true);
  spec.validate();
  return spec;
}

}  // namespace pidd::testing

#endif  // PIDD_TESTS_SUPPORT_HPP
