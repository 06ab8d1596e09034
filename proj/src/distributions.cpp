#include "pidd/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pidd {

double FinitePmf::total_mass() const {
  KahanSum s;
  for (double p : probs) s.add(p);
  return s.value();
}

void FinitePmf::validate(double atol) const {
  require(support.size() == probs.size(), "FinitePmf: support/probs size mismatch");
  for (double p : probs) require(p >= 0.0, "FinitePmf: negative probability");
  require(tail_mass >= 0.0, "FinitePmf: negative tail mass");
  std::set<CountVec> seen(support.begin(), support.end());
  require(seen.size() == support.size(), "FinitePmf: duplicate support points");
  const double total = total_mass() + tail_mass;
  require(std::abs(total - 1.0) <= atol, "FinitePmf: mass does not account to 1");
}

MvPoissonParams make_mv_poisson_params(int d, int d_prime,
                                       const std::map<IndexTuple, double>& lambdas) {
  require(d >= 1, "MvPoissonParams: d must be positive");
  require(d_prime >= 1 && d_prime <= d, "MvPoissonParams: need 1 <= d' <= d");
  MvPoissonParams params;
  params.d = d;
  params.d_prime = d_prime;
  for (int j = 1; j <= d_prime; ++j) {
    for (const auto& t : enum_index_tuples(d, j)) {
      auto it = lambdas.find(t);
      require(it != lambdas.end(), "MvPoissonParams: missing rate for an index tuple");
      require(it->second >= 0.0, "MvPoissonParams: negative rate");
      params.rates.push_back(it->second);
    }
  }
  require(lambdas.size() == params.rates.size(),
          "MvPoissonParams: extra rate entries outside the tuple sets");
  return params;
}

double scalar_poisson_log_pmf(double lambda, int k) {
  require(lambda >= 0.0, "scalar_poisson_pmf: negative rate");
  require(k >= 0, "scalar_poisson_pmf: negative count");
  if (lambda == 0.0) return k == 0 ? 0.0 : kNegInf;
  return -lambda + k * std::log(lambda) - log_factorial(k);
}

double scalar_poisson_pmf(double lambda, int k) {
  const double lp = scalar_poisson_log_pmf(lambda, k);
  return lp == kNegInf ? 0.0 : std::exp(lp);
}

double multinomial_pmf(int n, std::span<const double> p, const CountVec& k) {
  require(n >= 0, "multinomial_pmf: negative trial count");
  require(!p.empty(), "multinomial_pmf: empty probability vector");
  KahanSum psum;
  for (double pi : p) {
    require(pi >= 0.0, "multinomial_pmf: negative class probability");
    psum.add(pi);
  }
  require(std::abs(psum.value() - 1.0) <= 1e-12, "multinomial_pmf: probabilities do not sum to 1");
  require(k.size() == p.size(), "multinomial_pmf: count/probability size mismatch");
  long long ksum = 0;
  for (int ki : k) {
    require(ki >= 0, "multinomial_pmf: negative count entry");
    ksum += ki;
  }
  if (ksum != n) return 0.0;
  double lp = log_factorial(n);
  for (size_t i = 0; i < k.size(); ++i) {
    if (k[i] == 0) continue;
    if (p[i] == 0.0) return 0.0;
    lp += k[i] * std::log(p[i]) - log_factorial(k[i]);
  }
  return std::exp(lp);
}

namespace {

struct TupleVar {
  IndexTuple tuple;
  double rate;
  double log_rate_ratio;  // log(lambda_t) - sum_{i in t} log(lambda_i); closed form only
};

// Generator variables of order >= 2, canonical order, with per-variable data.
std::vector<TupleVar> higher_order_vars(const MvPoissonParams& params, bool with_ratio) {
  std::vector<TupleVar> vars;
  int col = params.d;  // skip the identity block
  for (int j = 2; j <= params.d_prime; ++j) {
    for (const auto& t : enum_index_tuples(params.d, j)) {
      TupleVar v;
      v.tuple = t;
      v.rate = params.rates[col];
      if (with_ratio && v.rate > 0.0) {
        double lr = std::log(v.rate);
        for (int i : t) lr -= std::log(params.rates[i - 1]);
        v.log_rate_ratio = lr;
      } else {
        v.log_rate_ratio = kNegInf;
      }
      vars.push_back(std::move(v));
      ++col;
    }
  }
  return vars;
}

void check_point(const MvPoissonParams& params, const CountVec& k) {
  require(static_cast<int>(k.size()) == params.d, "mv_poisson_pmf: dimension mismatch");
  for (int ki : k) require(ki >= 0, "mv_poisson_pmf: negative count entry");
}

}  // namespace

double mv_poisson_pmf_bruteforce(const MvPoissonParams& params, const CountVec& k) {
  check_point(params, k);
  const auto vars = higher_order_vars(params, /*with_ratio=*/false);
  std::vector<double> log_terms;
  CountVec budget = k;  // k_i - (a_i')^T k' so far
  auto rec = [&](auto&& self, size_t vi, double partial) -> void {
    if (vi == vars.size()) {
      double lp = partial;
      for (int i = 0; i < params.d; ++i) {
        lp += scalar_poisson_log_pmf(params.rates[i], budget[i]);
        if (lp == kNegInf) return;
      }
      log_terms.push_back(lp);
      return;
    }
    const auto& v = vars[vi];
    int cap = budget[v.tuple[0] - 1];
    for (int i : v.tuple) cap = std::min(cap, budget[i - 1]);
    if (v.rate == 0.0) cap = 0;
    for (int c = 0; c <= cap; ++c) {
      const double lp = partial + scalar_poisson_log_pmf(v.rate, c);
      if (lp != kNegInf) self(self, vi + 1, lp);
      for (int i : v.tuple) budget[i - 1] -= 1;
    }
    for (int i : v.tuple) budget[i - 1] += cap + 1;
  };
  rec(rec, 0, 0.0);
  const double lse = log_sum_exp(log_terms);
  return lse == kNegInf ? 0.0 : std::exp(lse);
}

double mv_poisson_pmf(const MvPoissonParams& params, const CountVec& k) {
  check_point(params, k);
  for (int i = 0; i < params.d; ++i) {
    if (params.rates[i] == 0.0) {
      // The closed form divides by the base rates; the generator enumeration
      // has no singularity, so degenerate specs take that route.
      return mv_poisson_pmf_bruteforce(params, k);
    }
  }
  KahanSum rate_sum;
  for (double r : params.rates) rate_sum.add(r);
  double log_front = -rate_sum.value();
  for (int i = 0; i < params.d; ++i) log_front += k[i] * std::log(params.rates[i]);

  const auto vars = higher_order_vars(params, /*with_ratio=*/true);
  std::vector<double> log_terms;
  CountVec budget = k;
  auto rec = [&](auto&& self, size_t vi, double partial) -> void {
    if (vi == vars.size()) {
      double lp = partial;
      for (int i = 0; i < params.d; ++i) lp -= log_factorial(budget[i]);
      log_terms.push_back(lp);
      return;
    }
    const auto& v = vars[vi];
    int cap = budget[v.tuple[0] - 1];
    for (int i : v.tuple) cap = std::min(cap, budget[i - 1]);
    if (v.rate == 0.0) cap = 0;
    for (int c = 0; c <= cap; ++c) {
      const double lp = partial + (c == 0 ? 0.0 : c * v.log_rate_ratio) - log_factorial(c);
      self(self, vi + 1, lp);
      for (int i : v.tuple) budget[i - 1] -= 1;
    }
    for (int i : v.tuple) budget[i - 1] += cap + 1;
  };
  rec(rec, 0, 0.0);
  const double lse = log_sum_exp(log_terms);
  return lse == kNegInf ? 0.0 : std::exp(log_front + lse);
}

double poisson_upper_tail(double lambda, int c) {
  require(lambda >= 0.0, "poisson_upper_tail: negative rate");
  require(c >= 0, "poisson_upper_tail: negative cap");
  if (lambda == 0.0) return 0.0;
  double term = scalar_poisson_pmf(lambda, c + 1);
  KahanSum s;
  int k = c + 1;
  while (term > 0.0) {
    s.add(term);
    ++k;
    term *= lambda / k;
    if (term <= s.value() * 1e-18 && k > lambda) break;
  }
  return s.value();
}

int poisson_tail_cap(double lambda, double tail_bound) {
  require(tail_bound > 0.0, "poisson_tail_cap: bound must be positive");
  int c = 0;
  while (poisson_upper_tail(lambda, c) > tail_bound) ++c;
  return c;
}

int poisson_box_cap(const MvPoissonParams& params, double epsilon) {
  require(epsilon > 0.0 && epsilon < 1.0, "truncated_support: epsilon must be in (0,1)");
  const AMatrix a = build_a_matrix(params.d, params.d_prime);
  const double per_gen = epsilon / params.n_generators();

  // Each component K_i is Poisson with the sum of its covering rates; the
  // box cap takes the worst component so the union bound over components
  // stays below epsilon (d <= n_generators).
  int k_max = 0;
  for (int i = 0; i < params.d; ++i) {
    double mu = 0.0;
    for (int c = 0; c < a.n_cols(); ++c) {
      if (a.at(i, c)) mu += params.rates[c];
    }
    if (mu > 0.0) k_max = std::max(k_max, poisson_tail_cap(mu, per_gen));
  }
  return k_max;
}

FinitePmf poisson_box_pmf(const MvPoissonParams& params, int k_max) {
  require(k_max >= 0, "poisson_box_pmf: negative cap");
  const AMatrix a = build_a_matrix(params.d, params.d_prime);
  const int side = k_max + 1;
  size_t cells = 1;
  for (int i = 0; i < params.d; ++i) cells *= static_cast<size_t>(side);

  // Generator-space convolution: shifts only grow coordinates, so dropping
  // out-of-box mass is exact for every in-box entry.
  std::vector<double> table(cells, 0.0), next(cells, 0.0);
  table[0] = 1.0;
  std::vector<size_t> strides(params.d, 1);
  for (int i = params.d - 2; i >= 0; --i) strides[i] = strides[i + 1] * side;

  const auto box = enumerate_box(params.d, k_max);
  for (int g = 0; g < a.n_cols(); ++g) {
    const double rate = params.rates[g];
    std::fill(next.begin(), next.end(), 0.0);
    const auto& tuple = a.column_index[g];
    double w = std::exp(-rate);
    for (int c = 0; c <= k_max; ++c) {
      if (c > 0) {
        if (rate == 0.0) break;
        w *= rate / c;
      }
      if (w == 0.0 && c > 0) break;
      for (size_t idx = 0; idx < cells; ++idx) {
        const double v = table[idx];
        if (v == 0.0) continue;
        size_t dest = idx;
        bool ok = true;
        for (int r : tuple) {
          if (box[idx][r - 1] + c > k_max) {
            ok = false;
            break;
          }
          dest += static_cast<size_t>(c) * strides[r - 1];
        }
        if (ok) next[dest] += w * v;
      }
    }
    table.swap(next);
  }

  FinitePmf pmf;
  pmf.support = box;
  pmf.probs = std::move(table);
  KahanSum total;
  for (double p : pmf.probs) total.add(p);
  pmf.tail_mass = std::max(0.0, 1.0 - total.value());
  return pmf;
}

FinitePmf truncated_support(const MvPoissonParams& params, double epsilon) {
  return poisson_box_pmf(params, poisson_box_cap(params, epsilon));
}

}  // namespace pidd
