#ifndef PIDD_COMMON_HPP
#define PIDD_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pidd {

/// Nonnegative integer count vector, the support currency of all finite tables.
using CountVec = std::vector<int>;

/// 1-based, strictly increasing coordinate indices (an element of A_j^d).
using IndexTuple = std::vector<int>;

// Thrown when a Markov-chain construction is requested for a spec that does
// not satisfy the sufficient conditions (negative surplus probability).
class ConstructionInfeasibleError : public std::runtime_error {
 public:
  explicit ConstructionInfeasibleError(const std::string& what)
      : std::runtime_error(what) {}
};

// Thrown when the closed-form PID path is requested but the condition check
// returned `neither` orientation.
class ConditionsInconclusiveError : public std::runtime_error {
 public:
  explicit ConditionsInconclusiveError(const std::string& what)
      : std::runtime_error(what) {}
};

// A numerical result landed outside the band that rounding alone can explain.
class NumericalIntegrityError : public std::runtime_error {
 public:
  explicit NumericalIntegrityError(const std::string& what)
      : std::runtime_error(what) {}
};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(k!) with a precomputed table for small k, lgamma beyond.
double log_factorial(int k);

/// log(sum(exp(terms))); -inf terms are skipped, empty input yields -inf.
double log_sum_exp(std::span<const double> terms);

/// Compensated (Kahan) accumulator for long probability sums.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

struct CountVecHash {
  size_t operator()(const CountVec& v) const {
    size_t h = 1469598103934665603ULL;
    for (int x : v) {
      h ^= static_cast<size_t>(static_cast<uint32_t>(x));
      h *= 1099511628211ULL;
    }
    return h;
  }
};

/// All vectors k with 0 <= k_i <= cap, ascending lexicographic order.
std::vector<CountVec> enumerate_box(int dim, int cap);

/// All k in N_0^parts with sum(k) == total, ascending lexicographic order.
std::vector<CountVec> enumerate_compositions(int total, int parts);

inline void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

}  // namespace pidd

#endif  // PIDD_COMMON_HPP
