#include "pidd/information.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pidd {

namespace {
const double kLog2 = std::log(2.0);

double binary_entropy(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return -(t * std::log2(t) + (1.0 - t) * std::log2(1.0 - t));
}
}  // namespace

double truncation_envelope(double tail_mass, size_t cells) {
  if (tail_mass <= 0.0) return 0.0;
  const double t = std::min(tail_mass, 0.5);
  return tail_mass * std::log2(static_cast<double>(std::max<size_t>(cells, 2))) +
         binary_entropy(t);
}

double clamp_information(double bits, const char* label) {
  if (bits >= 0.0) return bits;
  if (bits >= -1e-12) return 0.0;
  throw NumericalIntegrityError(std::string(label) + " is negative beyond rounding: " +
                                std::to_string(bits));
}

InfoValue entropy(std::span<const double> probs, double tail_mass) {
  // Truncated inputs are renormalized; the value refers to the distribution
  // conditioned on the included support, the bound covers the difference.
  KahanSum total;
  for (double p : probs) {
    require(p >= 0.0, "entropy: negative probability");
    total.add(p);
  }
  const double t = total.value();
  require(t > 0.0, "entropy: zero total mass");
  KahanSum acc;
  for (double p : probs) {
    if (p > 0.0) {
      const double q = p / t;
      acc.add(-q * std::log(q));
    }
  }
  InfoValue out;
  out.bits = clamp_information(acc.value() / kLog2, "entropy");
  out.truncation_bound = truncation_envelope(tail_mass, probs.size());
  return out;
}

InfoValue entropy(const FinitePmf& pmf) { return entropy(pmf.probs, pmf.tail_mass); }

InfoValue mutual_information(const JointPmf& joint, const std::vector<size_t>& axes_a,
                             const std::vector<size_t>& axes_b) {
  require(!axes_a.empty() && !axes_b.empty(), "mutual_information: empty axis group");
  for (size_t a : axes_a) {
    for (size_t b : axes_b) require(a != b, "mutual_information: axis groups overlap");
  }
  std::vector<size_t> keep;
  keep.insert(keep.end(), axes_a.begin(), axes_a.end());
  keep.insert(keep.end(), axes_b.begin(), axes_b.end());
  std::sort(keep.begin(), keep.end());
  const JointPmf m = joint.marginal(keep);

  // Axis roles inside the marginalized table.
  std::vector<bool> in_a(m.axes.size(), false);
  for (size_t i = 0; i < keep.size(); ++i) {
    for (size_t a : axes_a) {
      if (keep[i] == a) in_a[i] = true;
    }
  }
  std::vector<size_t> dims(m.axes.size());
  size_t na = 1, nb = 1;
  for (size_t i = 0; i < m.axes.size(); ++i) {
    dims[i] = m.axes[i].points.size();
    (in_a[i] ? na : nb) *= dims[i];
  }

  std::vector<double> pa(na, 0.0), pb(nb, 0.0);
  std::vector<size_t> idx(m.axes.size(), 0);
  std::vector<size_t> a_flat_of(m.table.size()), b_flat_of(m.table.size());
  for (size_t flat = 0; flat < m.table.size(); ++flat) {
    size_t fa = 0, fb = 0;
    for (size_t i = 0; i < m.axes.size(); ++i) {
      if (in_a[i]) {
        fa = fa * dims[i] + idx[i];
      } else {
        fb = fb * dims[i] + idx[i];
      }
    }
    a_flat_of[flat] = fa;
    b_flat_of[flat] = fb;
    pa[fa] += m.table[flat];
    pb[fb] += m.table[flat];
    for (size_t i = m.axes.size(); i-- > 0;) {
      if (++idx[i] < dims[i]) break;
      idx[i] = 0;
    }
  }

  const double total = m.total_mass();
  require(total > 0.0, "mutual_information: zero total mass");
  KahanSum acc;
  for (size_t flat = 0; flat < m.table.size(); ++flat) {
    const double p = m.table[flat];
    if (p <= 0.0) continue;
    acc.add(p * std::log(p * total / (pa[a_flat_of[flat]] * pb[b_flat_of[flat]])));
  }
  InfoValue out;
  out.bits = clamp_information(acc.value() / (total * kLog2), "mutual information");
  out.truncation_bound = truncation_envelope(joint.tail_mass, m.table.size());
  return out;
}

InfoValue conditional_mutual_information(const JointPmf& joint, size_t axis_a,
                                         size_t axis_b, size_t axis_cond) {
  require(joint.axes.size() == 3, "conditional_mutual_information: need a 3-axis joint");
  require(axis_a != axis_b && axis_a != axis_cond && axis_b != axis_cond,
          "conditional_mutual_information: axes must be distinct");

  const size_t n0 = joint.axis_size(0), n1 = joint.axis_size(1), n2 = joint.axis_size(2);
  auto flat3 = [&](size_t i, size_t j, size_t k) { return (i * n1 + j) * n2 + k; };

  std::vector<size_t> dims = {n0, n1, n2};
  const size_t nc = dims[axis_cond];
  const size_t nac = dims[axis_a] * nc;
  const size_t nbc = dims[axis_b] * nc;
  std::vector<double> pc(nc, 0.0), pac(nac, 0.0), pbc(nbc, 0.0);

  std::vector<size_t> id(3);
  for (id[0] = 0; id[0] < n0; ++id[0]) {
    for (id[1] = 0; id[1] < n1; ++id[1]) {
      for (id[2] = 0; id[2] < n2; ++id[2]) {
        const double p = joint.table[flat3(id[0], id[1], id[2])];
        if (p == 0.0) continue;
        pc[id[axis_cond]] += p;
        pac[id[axis_a] * nc + id[axis_cond]] += p;
        pbc[id[axis_b] * nc + id[axis_cond]] += p;
      }
    }
  }

  // The normalizing total cancels inside the log ratio, so only the outer
  // weight needs it.
  const double total = joint.total_mass();
  require(total > 0.0, "conditional_mutual_information: zero total mass");
  KahanSum acc;
  for (id[0] = 0; id[0] < n0; ++id[0]) {
    for (id[1] = 0; id[1] < n1; ++id[1]) {
      for (id[2] = 0; id[2] < n2; ++id[2]) {
        const double p = joint.table[flat3(id[0], id[1], id[2])];
        if (p <= 0.0) continue;
        const double num = p * pc[id[axis_cond]];
        const double den =
            pac[id[axis_a] * nc + id[axis_cond]] * pbc[id[axis_b] * nc + id[axis_cond]];
        acc.add(p * std::log(num / den));
      }
    }
  }
  InfoValue out;
  out.bits = clamp_information(acc.value() / (total * kLog2), "conditional mutual information");
  out.truncation_bound = truncation_envelope(joint.tail_mass, joint.table.size());
  return out;
}

}  // namespace pidd
