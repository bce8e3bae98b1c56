#pragma once

#include <optional>
#include <vector>

#include "opmatch/core.h"

namespace opmatch::metrics {

enum class RateKind { point, record };

// A Q point counts as recovered when its assigned tuple equals its true tuple.
// Unassigned or truth-less points count as wrong.
Rational point_recovery(const Assignment& a, const Dataset& Q, const Truth& truth);
Rational record_recovery(const Assignment& a, const Dataset& Q, const Truth& truth);

// Q_r: Q points whose true tuple is present in P.
std::vector<char> recoverable(const Dataset& Q, const Dataset& P, const Truth& truth);

// raw / (|Q_r|/|Q|) for points, raw / (records of Q_r / records of Q) for
// records. Throws UndefinedMetric when Q_r is empty.
Rational normalized_recovery(const Rational& raw, const Dataset& Q, const Dataset& P,
                             const Truth& truth, RateKind kind);

// Throws UndefinedMetric when exact is 0.
Rational normalized_objective(const Rational& achieved, const Rational& exact);

// Without an axis: |Q_r| / |P|. With one: distinct true values of Q_r on that
// axis over distinct values of P on that axis.
Rational overlap_ratio(const Dataset& P, const Dataset& Q, const Truth& truth,
                       std::optional<std::size_t> axis = std::nullopt);

// Over the union support; a point missing from one side has frequency 0.
double hellinger(const Dataset& P, const Dataset& Q);

struct MetricsReport {
  Rational point_recovery;
  Rational record_recovery;
  std::optional<Rational> normalized_point_recovery;
  std::optional<Rational> normalized_record_recovery;
  std::optional<Rational> normalized_objective;
  Rational overlap_ratio_2d;
  std::vector<Rational> overlap_ratio_per_axis;
  double hellinger = 0;
  double runtime_seconds = 0;
};

// Normalized fields are left empty where the metric is undefined.
MetricsReport evaluate(const Dataset& P, const Dataset& Q, const Truth& truth,
                       const Assignment& a, std::optional<Rational> achieved = std::nullopt,
                       std::optional<Rational> exact = std::nullopt);

}  // namespace opmatch::metrics
