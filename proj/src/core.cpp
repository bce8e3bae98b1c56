#include "opmatch/core.h"

#include <map>
#include <string>

#include "opmatch/errors.h"

namespace opmatch {

Dataset Dataset::from_rows(std::size_t dim, std::vector<Row> rows, bool merge_duplicates,
                           int scale) {
  if (dim == 0) throw StructuralError("dataset dimension must be at least 1");
  for (const Row& r : rows) {
    if (r.coords.size() != dim) {
      throw StructuralError("row has " + std::to_string(r.coords.size()) +
                            " coordinates, expected " + std::to_string(dim));
    }
    if (r.count < 0) throw ValidationError("negative record count");
  }
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.coords < b.coords; });

  Dataset ds(dim, scale);
  for (Row& r : rows) {
    if (!ds.points_.empty() && ds.points_.back().coords == r.coords) {
      if (!merge_duplicates) throw ValidationError("duplicate coordinates");
      ds.points_.back().raw_count += r.count;
    } else {
      ds.points_.push_back(Point{std::move(r.coords), r.count, Rational(0)});
    }
  }
  ds.flat_.reserve(ds.points_.size() * dim);
  for (Point& p : ds.points_) {
    ds.total_ += p.raw_count;
    ds.flat_.insert(ds.flat_.end(), p.coords.begin(), p.coords.end());
  }
  if (ds.total_ > 0) {
    for (Point& p : ds.points_) p.freq = make_rational(p.raw_count, ds.total_);
  }
  return ds;
}

std::optional<std::size_t> Dataset::find(std::span<const Coord> coords) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), coords,
                             [](const Point& p, std::span<const Coord> c) {
                               return std::lexicographical_compare(
                                   p.coords.begin(), p.coords.end(), c.begin(), c.end());
                             });
  if (it == points_.end() || !std::equal(it->coords.begin(), it->coords.end(),
                                         coords.begin(), coords.end())) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - points_.begin());
}

std::vector<Dataset::Row> Dataset::rows() const {
  std::vector<Row> out;
  out.reserve(points_.size());
  for (const Point& p : points_) out.push_back(Row{p.coords, p.raw_count});
  return out;
}

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.dim_ != b.dim_ || a.scale_ != b.scale_ || a.total_ != b.total_ ||
      a.points_.size() != b.points_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.points_.size(); ++i) {
    if (a.points_[i].coords != b.points_[i].coords ||
        a.points_[i].raw_count != b.points_[i].raw_count) {
      return false;
    }
  }
  return true;
}

Assignment assignment_from(const Matching& m, const Dataset& P, const Dataset& Q) {
  Assignment out(Q.size());
  for (Edge e : m.edges) {
    if (e.p >= P.size() || e.q >= Q.size()) throw StructuralError("edge out of range");
    out[e.q] = P[e.p].coords;
  }
  return out;
}

MatchedFlags::MatchedFlags(const Matching& m, std::size_t np, std::size_t nq)
    : p(np, 0), q(nq, 0) {
  for (Edge e : m.edges) add(e);
}

const char* to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::unit: return "unit";
    case WeightKind::min_freq: return "min";
    case WeightKind::kappa_diff: return "kappa-diff";
  }
  return "?";
}

WeightKind parse_weight_kind(std::string_view name) {
  if (name == "unit") return WeightKind::unit;
  if (name == "min" || name == "min_freq" || name == "min-freq") return WeightKind::min_freq;
  if (name == "kappa-diff" || name == "kappa_diff") return WeightKind::kappa_diff;
  throw ConfigError("unknown weight kind '" + std::string(name) + "'");
}

bool dominates(const Point& a, const Point& b) {
  if (a.coords.size() != b.coords.size() || a.coords.empty()) {
    throw StructuralError("dominance needs points of equal, nonzero dimension");
  }
  if (a.coords[0] < b.coords[0]) return true;
  if (a.coords[0] > b.coords[0] || a.coords.size() == 1) return false;
  for (std::size_t k = 1; k < a.coords.size(); ++k) {
    if (!(b.coords[k] < a.coords[k])) return false;
  }
  return true;
}

namespace {

void check_edge(Edge e, const Dataset& P, const Dataset& Q) {
  if (e.p >= P.size() || e.q >= Q.size()) {
    throw StructuralError("edge (" + std::to_string(e.p) + "," + std::to_string(e.q) +
                          ") out of range");
  }
}

void check_dims(const Dataset& P, const Dataset& Q) {
  if (P.dim() != Q.dim()) throw StructuralError("P and Q dimensions differ");
}

}  // namespace

bool edges_conflict(Edge e1, Edge e2, const Dataset& P, const Dataset& Q) {
  check_dims(P, Q);
  check_edge(e1, P, Q);
  check_edge(e2, P, Q);
  if (e1.p == e2.p || e1.q == e2.q) {
    throw ContractViolation("conflict is undefined for edges sharing an endpoint");
  }
  return conflict_unchecked(P, Q, e1, e2);
}

bool conflicts_with_any(Edge e, const Matching& m, const Dataset& P, const Dataset& Q) {
  for (Edge f : m.edges) {
    if (f.p == e.p || f.q == e.q) continue;
    if (conflict_unchecked(P, Q, e, f)) return true;
  }
  return false;
}

bool is_order_preserving(const Matching& m, const Dataset& P, const Dataset& Q) {
  check_dims(P, Q);
  MatchedFlags used(P.size(), Q.size());
  for (Edge e : m.edges) {
    check_edge(e, P, Q);
    if (used.p[e.p] || used.q[e.q]) return false;
    used.add(e);
  }
  for (std::size_t i = 0; i < m.edges.size(); ++i) {
    for (std::size_t j = i + 1; j < m.edges.size(); ++j) {
      if (conflict_unchecked(P, Q, m.edges[i], m.edges[j])) return false;
    }
  }
  return true;
}

Rational default_kappa(const Dataset& P, const Dataset& Q) {
  Rational best = 0;
  for (const Point& p : P) best = std::max(best, p.freq);
  for (const Point& q : Q) best = std::max(best, q.freq);
  return best;
}

WeightSpec resolve(WeightSpec spec, const Dataset& P, const Dataset& Q) {
  if (spec.kind == WeightKind::kappa_diff && !spec.kappa) spec.kappa = default_kappa(P, Q);
  if (spec.kappa && *spec.kappa < 0) throw ConfigError("kappa must be nonnegative");
  return spec;
}

Rational edge_weight(const Point& p, const Point& q, const WeightSpec& w) {
  switch (w.kind) {
    case WeightKind::unit:
      return Rational(1);
    case WeightKind::min_freq:
      return std::min(p.freq, q.freq);
    case WeightKind::kappa_diff: {
      if (!w.kappa) throw ConfigError("kappa_diff weight needs a resolved kappa");
      Rational diff = p.freq - q.freq;
      if (diff < 0) diff = -diff;
      Rational out = *w.kappa - diff;
      if (out < 0) {
        throw ConfigError("kappa " + format_rational(*w.kappa) +
                          " is smaller than a frequency difference");
      }
      return out;
    }
  }
  return Rational(0);
}

Rational matching_weight(const Matching& m, const Dataset& P, const Dataset& Q,
                         const WeightSpec& w) {
  const WeightSpec spec = resolve(w, P, Q);
  Rational total = 0;
  for (Edge e : m.edges) {
    check_edge(e, P, Q);
    total += edge_weight(P[e.p], Q[e.q], spec);
  }
  return total;
}

WeightTable::WeightTable(const Dataset& P, const Dataset& Q, WeightSpec spec)
    : spec_(resolve(std::move(spec), P, Q)), np_(P.size()), nq_(Q.size()) {
  check_dims(P, Q);
  values_.assign(np_ * nq_, 0);
  if (values_.empty()) return;

  const WeightValue tp = P.total_records();
  const WeightValue tq = Q.total_records();
  const WeightValue tpq = checked_mul(tp, tq);
  switch (spec_.kind) {
    case WeightKind::unit:
      denominator_ = 1;
      std::fill(values_.begin(), values_.end(), WeightValue{1});
      break;
    case WeightKind::min_freq:
      if (tpq == 0) throw ValidationError("dataset has zero total records");
      denominator_ = tpq;
      for (std::size_t i = 0; i < np_; ++i) {
        for (std::size_t j = 0; j < nq_; ++j) {
          values_[i * nq_ + j] = std::min(checked_mul(P.count(i), tq), checked_mul(Q.count(j), tp));
        }
      }
      break;
    case WeightKind::kappa_diff: {
      if (tpq == 0) throw ValidationError("dataset has zero total records");
      const BigInt kn = boost::multiprecision::numerator(*spec_.kappa);
      const BigInt kd = boost::multiprecision::denominator(*spec_.kappa);
      const BigInt d = boost::multiprecision::lcm(kd, to_bigint(tpq));
      denominator_ = to_weight_value(d);
      const WeightValue kappa_scaled = to_weight_value(kn * (d / kd));
      const WeightValue diff_scale = to_weight_value(d / to_bigint(tpq));
      for (std::size_t i = 0; i < np_; ++i) {
        for (std::size_t j = 0; j < nq_; ++j) {
          WeightValue diff = checked_mul(P.count(i), tq) - checked_mul(Q.count(j), tp);
          if (diff < 0) diff = -diff;
          const WeightValue w = kappa_scaled - checked_mul(diff, diff_scale);
          if (w < 0) {
            throw ConfigError("kappa " + format_rational(*spec_.kappa) +
                              " is smaller than a frequency difference");
          }
          values_[i * nq_ + j] = w;
        }
      }
      break;
    }
  }
}

Rational WeightTable::to_rational(WeightValue scaled) const {
  return make_rational(scaled, denominator_);
}

WeightValue WeightTable::sum(const Matching& m) const {
  WeightValue total = 0;
  for (Edge e : m.edges) total = checked_add(total, at(e));
  return total;
}

}  // namespace opmatch
