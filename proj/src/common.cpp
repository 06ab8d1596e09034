#include "pidd/common.hpp"

#include <algorithm>
#include <cmath>

namespace pidd {

namespace {
constexpr int kLogFactTableSize = 4096;

std::vector<double> build_log_fact_table() {
  std::vector<double> t(kLogFactTableSize);
  t[0] = 0.0;
  for (int k = 1; k < kLogFactTableSize; ++k) t[k] = t[k - 1] + std::log(static_cast<double>(k));
  return t;
}
}  // namespace

double log_factorial(int k) {
  if (k < 0) throw std::invalid_argument("log_factorial: negative argument");
  static const std::vector<double> table = build_log_fact_table();
  if (k < kLogFactTableSize) return table[k];
  return std::lgamma(static_cast<double>(k) + 1.0);
}

double log_sum_exp(std::span<const double> terms) {
  double mx = kNegInf;
  for (double t : terms) mx = std::max(mx, t);
  if (mx == kNegInf) return kNegInf;
  KahanSum s;
  for (double t : terms) {
    if (t != kNegInf) s.add(std::exp(t - mx));
  }
  return mx + std::log(s.value());
}

std::vector<CountVec> enumerate_box(int dim, int cap) {
  require(dim >= 1, "enumerate_box: dim must be positive");
  require(cap >= 0, "enumerate_box: cap must be nonnegative");
  std::vector<CountVec> out;
  CountVec cur(dim, 0);
  while (true) {
    out.push_back(cur);
    int pos = dim - 1;
    while (pos >= 0 && cur[pos] == cap) {
      cur[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++cur[pos];
  }
  return out;
}

std::vector<CountVec> enumerate_compositions(int total, int parts) {
  require(total >= 0, "enumerate_compositions: total must be nonnegative");
  require(parts >= 1, "enumerate_compositions: parts must be positive");
  std::vector<CountVec> out;
  CountVec cur(parts, 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == parts - 1) {
      cur[pos] = remaining;
      out.push_back(cur);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      cur[pos] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  rec(rec, 0, total);
  return out;
}

}  // namespace pidd
