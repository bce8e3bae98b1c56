#include "opmatch/oned.h"

#include <algorithm>
#include <map>

#include "opmatch/errors.h"

namespace opmatch::oned {

CdfTable build_cdf(std::vector<std::pair<Coord, Rational>> values_with_freq) {
  if (values_with_freq.empty()) throw ValidationError("empty input to build_cdf");
  std::map<Coord, Rational> merged;
  for (auto& [v, f] : values_with_freq) {
    if (f < 0) throw ValidationError("negative frequency");
    merged[v] += f;
  }
  BigInt lcm = 1;
  for (const auto& [v, f] : merged) {
    lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(f));
  }
  CdfTable out;
  BigInt running = 0;
  std::vector<BigInt> scaled;
  for (const auto& [v, f] : merged) {
    running += boost::multiprecision::numerator(f) * (lcm / boost::multiprecision::denominator(f));
    out.values.push_back(v);
    scaled.push_back(running);
  }
  if (running == 0) throw ValidationError("all frequencies are zero");
  out.total = running;
  out.scaled_cum = std::move(scaled);
  out.cum.reserve(out.values.size());
  for (const BigInt& c : out.scaled_cum) out.cum.emplace_back(c, out.total);
  return out;
}

CdfTable marginal_cdf(const Dataset& ds, std::size_t axis) {
  if (axis >= ds.dim()) throw StructuralError("axis out of range");
  std::vector<std::pair<Coord, Rational>> vals;
  vals.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    vals.emplace_back(ds.coord(i, axis), Rational(ds.count(i)));
  }
  return build_cdf(std::move(vals));
}

NoncrossingMatch max_weight_noncrossing(const CdfTable& A, const CdfTable& B,
                                        const Rational& kappa) {
  NoncrossingMatch out;
  const std::size_t n = A.size();
  const std::size_t m = B.size();
  if (n == 0 || m == 0) return out;

  // w(i,j) * den = kn*TA*TB - kd*|a_i*TB - b_j*TA|, den = kd*TA*TB.
  const BigInt kn = boost::multiprecision::numerator(kappa);
  const BigInt kd = boost::multiprecision::denominator(kappa);
  const WeightValue ta = to_weight_value(A.total);
  const WeightValue tb = to_weight_value(B.total);
  const WeightValue base = to_weight_value(kn * A.total * B.total);
  const WeightValue kdv = to_weight_value(kd);
  std::vector<WeightValue> a(n), b(m);
  for (std::size_t i = 0; i < n; ++i) a[i] = checked_mul(to_weight_value(A.scaled_cum[i]), tb);
  for (std::size_t j = 0; j < m; ++j) b[j] = checked_mul(to_weight_value(B.scaled_cum[j]), ta);
  (void)to_weight_value(kd * A.total * B.total);

  enum : char { kDiag = 0, kUp = 1, kLeft = 2 };
  std::vector<char> choice(n * m);
  std::vector<WeightValue> prev(m + 1, 0), cur(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      WeightValue diff = a[i - 1] - b[j - 1];
      if (diff < 0) diff = -diff;
      const WeightValue w = base - checked_mul(kdv, diff);
      WeightValue best;
      char pick;
      if (w >= 0) {
        best = prev[j - 1] + w;
        pick = kDiag;
        if (prev[j] > best) { best = prev[j]; pick = kUp; }
      } else {
        best = prev[j];
        pick = kUp;
      }
      if (cur[j - 1] > best) { best = cur[j - 1]; pick = kLeft; }
      cur[j] = best;
      choice[(i - 1) * m + (j - 1)] = pick;
    }
    std::swap(prev, cur);
  }
  const WeightValue total = prev[m];

  std::size_t i = n, j = m;
  while (i > 0 && j > 0) {
    const char c = choice[(i - 1) * m + (j - 1)];
    if (c == kDiag) {
      out.pairs.emplace_back(i - 1, j - 1);
      --i;
      --j;
    } else if (c == kUp) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(out.pairs.begin(), out.pairs.end());
  out.weight = Rational(to_bigint(total), kd * A.total * B.total);
  return out;
}

Extended1d extended_1d_attack(const Dataset& P, const Dataset& Q, const Rational& kappa) {
  if (P.dim() != Q.dim()) throw StructuralError("P and Q dimensions differ");
  Extended1d out;
  out.assignment.assign(Q.size(), std::nullopt);
  if (P.empty() || Q.empty()) return out;
  const std::size_t d = Q.dim();
  out.axes.resize(d);

  for (std::size_t k = 0; k < d; ++k) {
    const CdfTable qa = marginal_cdf(Q, k);
    const CdfTable pa = marginal_cdf(P, k);
    const NoncrossingMatch mm = max_weight_noncrossing(qa, pa, kappa);
    AxisMatch& ax = out.axes[k];
    ax.q_values = qa.values;
    ax.p_value.assign(qa.size(), std::nullopt);
    for (auto [qi, pi] : mm.pairs) ax.p_value[qi] = pa.values[pi];
  }

  for (std::size_t j = 0; j < Q.size(); ++j) {
    Coords guess(d);
    bool complete = true;
    for (std::size_t k = 0; k < d && complete; ++k) {
      const AxisMatch& ax = out.axes[k];
      auto it = std::lower_bound(ax.q_values.begin(), ax.q_values.end(), Q.coord(j, k));
      const auto& pv = ax.p_value[static_cast<std::size_t>(it - ax.q_values.begin())];
      if (!pv) {
        complete = false;
      } else {
        guess[k] = *pv;
      }
    }
    if (complete) out.assignment[j] = std::move(guess);
  }
  return out;
}

}  // namespace opmatch::oned
