#include "opmatch/metrics.h"

#include <cmath>
#include <set>

#include "opmatch/errors.h"

namespace opmatch::metrics {

namespace {

void check_sizes(const Dataset& Q, const Truth& truth) {
  if (truth.size() != Q.size()) throw StructuralError("truth must have one entry per Q point");
}

bool correct(const Assignment& a, const Truth& truth, std::size_t j) {
  return j < a.size() && a[j] && truth[j] && *a[j] == *truth[j];
}

}  // namespace

Rational point_recovery(const Assignment& a, const Dataset& Q, const Truth& truth) {
  check_sizes(Q, truth);
  if (Q.empty()) return 0;
  std::int64_t hits = 0;
  for (std::size_t j = 0; j < Q.size(); ++j) hits += correct(a, truth, j) ? 1 : 0;
  return make_rational(hits, static_cast<std::int64_t>(Q.size()));
}

Rational record_recovery(const Assignment& a, const Dataset& Q, const Truth& truth) {
  check_sizes(Q, truth);
  if (Q.total_records() == 0) return 0;
  std::int64_t hits = 0;
  for (std::size_t j = 0; j < Q.size(); ++j) {
    if (correct(a, truth, j)) hits += Q.count(j);
  }
  return make_rational(hits, Q.total_records());
}

std::vector<char> recoverable(const Dataset& Q, const Dataset& P, const Truth& truth) {
  check_sizes(Q, truth);
  std::vector<char> out(Q.size(), 0);
  for (std::size_t j = 0; j < Q.size(); ++j) {
    out[j] = truth[j] && truth[j]->size() == P.dim() && P.find(*truth[j]).has_value();
  }
  return out;
}

Rational normalized_recovery(const Rational& raw, const Dataset& Q, const Dataset& P,
                             const Truth& truth, RateKind kind) {
  const std::vector<char> in = recoverable(Q, P, truth);
  std::int64_t num = 0, den = 0;
  for (std::size_t j = 0; j < Q.size(); ++j) {
    const std::int64_t unit = kind == RateKind::point ? 1 : Q.count(j);
    den += unit;
    if (in[j]) num += unit;
  }
  if (num == 0) throw UndefinedMetric("no target point has its plaintext in P");
  return raw / make_rational(num, den);
}

Rational normalized_objective(const Rational& achieved, const Rational& exact) {
  if (exact == 0) throw UndefinedMetric("optimal objective is 0");
  return achieved / exact;
}

Rational overlap_ratio(const Dataset& P, const Dataset& Q, const Truth& truth,
                       std::optional<std::size_t> axis) {
  const std::vector<char> in = recoverable(Q, P, truth);
  if (!axis) {
    if (P.empty()) return 0;
    std::set<Coords> distinct;
    for (std::size_t j = 0; j < Q.size(); ++j) {
      if (in[j]) distinct.insert(*truth[j]);
    }
    return make_rational(static_cast<std::int64_t>(distinct.size()),
                         static_cast<std::int64_t>(P.size()));
  }
  if (*axis >= P.dim()) throw StructuralError("axis out of range");
  std::set<Coord> pv, qv;
  for (std::size_t i = 0; i < P.size(); ++i) pv.insert(P.coord(i, *axis));
  for (std::size_t j = 0; j < Q.size(); ++j) {
    if (in[j]) qv.insert((*truth[j])[*axis]);
  }
  if (pv.empty()) return 0;
  return make_rational(static_cast<std::int64_t>(qv.size()), static_cast<std::int64_t>(pv.size()));
}

double hellinger(const Dataset& P, const Dataset& Q) {
  if (P.dim() != Q.dim()) throw StructuralError("P and Q dimensions differ");
  // Both are sorted by coordinates; walk them together.
  double sum = 0;
  std::size_t i = 0, j = 0;
  auto sq = [](const Rational& f) { return std::sqrt(to_double(f)); };
  while (i < P.size() || j < Q.size()) {
    double a = 0, b = 0;
    if (j == Q.size() || (i < P.size() && P[i].coords < Q[j].coords)) {
      a = sq(P[i++].freq);
    } else if (i == P.size() || Q[j].coords < P[i].coords) {
      b = sq(Q[j++].freq);
    } else {
      a = sq(P[i++].freq);
      b = sq(Q[j++].freq);
    }
    sum += (a - b) * (a - b);
  }
  return std::min(1.0, std::sqrt(sum / 2));
}

MetricsReport evaluate(const Dataset& P, const Dataset& Q, const Truth& truth,
                       const Assignment& a, std::optional<Rational> achieved,
                       std::optional<Rational> exact) {
  MetricsReport r;
  r.point_recovery = point_recovery(a, Q, truth);
  r.record_recovery = record_recovery(a, Q, truth);
  try {
    r.normalized_point_recovery = normalized_recovery(r.point_recovery, Q, P, truth, RateKind::point);
    r.normalized_record_recovery =
        normalized_recovery(r.record_recovery, Q, P, truth, RateKind::record);
  } catch (const UndefinedMetric&) {
  }
  if (achieved && exact && *exact != 0) r.normalized_objective = normalized_objective(*achieved, *exact);
  r.overlap_ratio_2d = overlap_ratio(P, Q, truth);
  for (std::size_t k = 0; k < P.dim(); ++k) r.overlap_ratio_per_axis.push_back(overlap_ratio(P, Q, truth, k));
  r.hellinger = hellinger(P, Q);
  return r;
}

}  // namespace opmatch::metrics
