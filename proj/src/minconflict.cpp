#include "opmatch/minconflict.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "opmatch/errors.h"
#include "opmatch/parallel.h"
#include "opmatch/rng.h"

namespace opmatch::minconflict {

bool general_position(const Dataset& ds) {
  std::vector<Coord> v(ds.size());
  for (std::size_t k = 0; k < ds.dim(); ++k) {
    for (std::size_t i = 0; i < ds.size(); ++i) v[i] = ds.coord(i, k);
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) return false;
  }
  return true;
}

std::vector<Edge> surviving_candidates(const Dataset& P, const Dataset& Q, const Matching& M) {
  const MatchedFlags used(M, P.size(), Q.size());
  std::vector<Edge> out;
  for (std::uint32_t i = 0; i < P.size(); ++i) {
    if (used.p[i]) continue;
    for (std::uint32_t j = 0; j < Q.size(); ++j) {
      if (used.q[j]) continue;
      const Edge e{i, j};
      if (!conflicts_with_any(e, M, P, Q)) out.push_back(e);
    }
  }
  return out;
}

namespace {

inline bool disjoint(Edge a, Edge b) { return a.p != b.p && a.q != b.q; }

void require_survivor(Edge e, const Dataset& P, const Dataset& Q, const Matching& M) {
  if (P.dim() != Q.dim()) throw StructuralError("P and Q dimensions differ");
  if (e.p >= P.size() || e.q >= Q.size()) throw StructuralError("edge out of range");
  const MatchedFlags used(M, P.size(), Q.size());
  if (!used.free(e)) throw ContractViolation("edge endpoint already matched");
  if (conflicts_with_any(e, M, P, Q)) throw ContractViolation("edge conflicts with the matching");
}

}  // namespace

Rational conflict_score_bruteforce(Edge e, const Dataset& P, const Dataset& Q,
                                   const Matching& M, const WeightSpec& w) {
  require_survivor(e, P, Q, M);
  const WeightTable table(P, Q, w);
  WeightValue total = 0;
  for (Edge c : surviving_candidates(P, Q, M)) {
    if (disjoint(e, c) && conflict_unchecked(P, Q, e, c)) total = checked_add(total, table.at(c));
  }
  return table.to_rational(total);
}

// ---------------------------------------------------------------------------
// QuadrantCounter

QuadrantCounter::QuadrantCounter(const Dataset& P, const Dataset& Q) : P_(P), Q_(Q) {
  if (P.dim() != 2 || Q.dim() != 2) throw ContractViolation("quadrant counting needs d = 2");
  if (!general_position(P) || !general_position(Q)) {
    throw ContractViolation("quadrant counting needs distinct coordinates on each axis");
  }
}

void QuadrantCounter::refresh(const Matching& M, const std::vector<char>* p_mask,
                              const std::vector<char>* q_mask) {
  const std::size_t n = P_.size(), m = Q_.size();
  const MatchedFlags used(M, n, m);
  std::vector<Coord> mpx, mpy, mqx, mqy;
  for (Edge e : M.edges) {
    mpx.push_back(P_.coord(e.p, 0));
    mpy.push_back(P_.coord(e.p, 1));
    mqx.push_back(Q_.coord(e.q, 0));
    mqy.push_back(Q_.coord(e.q, 1));
  }
  for (auto* v : {&mpx, &mpy, &mqx, &mqy}) std::sort(v->begin(), v->end());
  const std::size_t bands = M.size() + 1;

  auto rank = [](const std::vector<Coord>& cuts, Coord v) {
    return static_cast<std::uint32_t>(std::lower_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
  };
  pp_.assign(n, Place{});
  qp_.assign(m, Place{});
  std::vector<char> pa(n), qa(m);
  for (std::size_t i = 0; i < n; ++i) {
    pp_[i].col = rank(mpx, P_.coord(i, 0));
    pp_[i].row = rank(mpy, P_.coord(i, 1));
    pa[i] = !used.p[i] && (!p_mask || (*p_mask)[i]);
  }
  for (std::size_t j = 0; j < m; ++j) {
    qp_[j].col = rank(mqx, Q_.coord(j, 0));
    qp_[j].row = rank(mqy, Q_.coord(j, 1));
    qa[j] = !used.q[j] && (!q_mask || (*q_mask)[j]);
  }

  // axis 0: strips are columns, partners must share the row; axis 1 the reverse.
  for (int axis = 0; axis < 2; ++axis) {
    auto band_of = [&](const Place& pl) { return axis == 0 ? pl.col : pl.row; };
    auto other_of = [&](const Place& pl) { return axis == 0 ? pl.row : pl.col; };
    std::vector<std::vector<std::uint32_t>> ps(bands), qs(bands);
    for (std::uint32_t i = 0; i < n; ++i) if (pa[i]) ps[band_of(pp_[i])].push_back(i);
    for (std::uint32_t j = 0; j < m; ++j) if (qa[j]) qs[band_of(qp_[j])].push_back(j);
    std::vector<Strip>& strips = axis == 0 ? col_strips_ : row_strips_;
    strips.assign(bands, Strip{});
    for (std::size_t b = 0; b < bands; ++b) {
      auto& pl = ps[b];
      auto& ql = qs[b];
      std::sort(pl.begin(), pl.end(), [&](auto x, auto y) { return P_.coord(x, axis) < P_.coord(y, axis); });
      std::sort(ql.begin(), ql.end(), [&](auto x, auto y) { return Q_.coord(x, axis) < Q_.coord(y, axis); });
      Strip& s = strips[b];
      s.rows = pl.size() + 1;
      s.cols = ql.size() + 1;
      s.table.assign(s.rows * s.cols, 0);
      for (std::size_t u = 0; u < pl.size(); ++u) {
        for (std::size_t v = 0; v < ql.size(); ++v) {
          const std::int64_t same = other_of(pp_[pl[u]]) == other_of(qp_[ql[v]]) ? 1 : 0;
          s.table[(u + 1) * s.cols + v + 1] = s.table[u * s.cols + v + 1] +
                                              s.table[(u + 1) * s.cols + v] -
                                              s.table[u * s.cols + v] + same;
        }
      }
      // Positions of every point (active or not) among this strip's active points.
      std::vector<Coord> pv, qv;
      for (auto i : pl) pv.push_back(P_.coord(i, axis));
      for (auto j : ql) qv.push_back(Q_.coord(j, axis));
      auto place = [&](Place& at, const std::vector<Coord>& vals, Coord c) {
        const auto lt = static_cast<std::uint32_t>(std::lower_bound(vals.begin(), vals.end(), c) - vals.begin());
        const auto le = static_cast<std::uint32_t>(std::upper_bound(vals.begin(), vals.end(), c) - vals.begin());
        if (axis == 0) { at.x_lt = lt; at.x_le = le; } else { at.y_lt = lt; at.y_le = le; }
      };
      for (std::uint32_t i = 0; i < n; ++i) if (band_of(pp_[i]) == b) place(pp_[i], pv, P_.coord(i, axis));
      for (std::uint32_t j = 0; j < m; ++j) if (band_of(qp_[j]) == b) place(qp_[j], qv, Q_.coord(j, axis));
    }
  }

  auto quadrants = [&](const Dataset& D, const std::vector<Place>& places,
                       const std::vector<char>& active, const std::vector<char>& matched,
                       std::vector<QuadrantCounts>& out) {
    const std::size_t cnt = D.size();
    out.assign(cnt, QuadrantCounts{});
    std::vector<std::uint32_t> order(cnt);
    std::iota(order.begin(), order.end(), 0u);
    auto cell = [&](std::uint32_t i) {
      return static_cast<std::uint64_t>(places[i].col) * bands + places[i].row;
    };
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return cell(a) < cell(b); });
    for (std::size_t g = 0; g < cnt;) {
      std::size_t h = g;
      while (h < cnt && cell(order[h]) == cell(order[g])) ++h;
      for (std::size_t s = g; s < h; ++s) {
        const std::uint32_t i = order[s];
        if (matched[i]) continue;
        QuadrantCounts& qc = out[i];
        for (std::size_t t = g; t < h; ++t) {
          const std::uint32_t o = order[t];
          if (o == i || !active[o]) continue;
          const bool left = D.coord(o, 0) < D.coord(i, 0);
          const bool up = D.coord(o, 1) > D.coord(i, 1);
          if (left && up) ++qc.nw;
          else if (!left && up) ++qc.ne;
          else if (left) ++qc.sw;
          else ++qc.se;
        }
      }
      g = h;
    }
  };
  quadrants(P_, pp_, pa, used.p, pq_);
  quadrants(Q_, qp_, qa, used.q, qq_);
}

std::int64_t QuadrantCounter::count(Edge e) const {
  const Place& p = pp_[e.p];
  const Place& q = qp_[e.q];
  if (p.col != q.col || p.row != q.row) throw ContractViolation("edge is not a survivor");
  const Strip& c = col_strips_[p.col];
  const std::size_t U = c.rows - 1, V = c.cols - 1;
  const std::int64_t x = c.at(p.x_lt, V) - c.at(p.x_lt, q.x_le) + c.at(U, q.x_lt) - c.at(p.x_le, q.x_lt);
  const Strip& r = row_strips_[p.row];
  const std::size_t UR = r.rows - 1, VR = r.cols - 1;
  const std::int64_t y = r.at(p.y_lt, VR) - r.at(p.y_lt, q.y_le) + r.at(UR, q.y_lt) - r.at(p.y_le, q.y_lt);
  const QuadrantCounts& a = pq_[e.p];
  const QuadrantCounts& b = qq_[e.q];
  const std::int64_t both = a.nw * b.se + a.se * b.nw + a.ne * b.sw + a.sw * b.ne;
  return x + y - both;
}

// ---------------------------------------------------------------------------
// Shared scoring machinery

namespace {

struct Pool {
  const Dataset& P;
  const Dataset& Q;
  const WeightTable& table;
  std::vector<Edge> alive;
  std::vector<WeightValue> w;

  Pool(const Dataset& P_, const Dataset& Q_, const WeightTable& t, std::vector<Edge> edges)
      : P(P_), Q(Q_), table(t), alive(std::move(edges)) {
    w.reserve(alive.size());
    for (Edge e : alive) w.push_back(table.at(e));
  }

  bool conflict(std::size_t a, std::size_t b) const {
    return disjoint(alive[a], alive[b]) && conflict_unchecked(P, Q, alive[a], alive[b]);
  }
};

// Horvitz-Thompson contributions scaled by k * D; zero when not sampled.
std::vector<WeightValue> draw_sample(const Pool& pool, std::uint64_t k, Rng& rng) {
  const std::size_t n = pool.alive.size();
  std::vector<WeightValue> contrib(n, 0);
  if (k == 0) throw ConfigError("sample size k must be at least 1");
  const WeightValue kk = static_cast<WeightValue>(k);
  if (k >= n) {
    for (std::size_t i = 0; i < n; ++i) contrib[i] = checked_mul(pool.w[i], kk);
    return contrib;
  }
  WeightValue total = 0;
  for (WeightValue v : pool.w) total = checked_add(total, v);
  auto draw = [&](WeightValue num, WeightValue den) {
    if (num >= den) return true;
    if (num <= 0) return false;
    return rng.below128(static_cast<unsigned __int128>(den)) < static_cast<unsigned __int128>(num);
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (total == 0) {
      if (draw(kk, static_cast<WeightValue>(n))) {
        contrib[i] = checked_mul(pool.w[i], static_cast<WeightValue>(n));
      }
    } else {
      const WeightValue num = checked_mul(kk, pool.w[i]);
      if (!draw(num, total)) continue;
      contrib[i] = num >= total ? num : total;
    }
  }
  return contrib;
}

WeightValue sampled_estimate(const Pool& pool, std::size_t e,
                             const std::vector<std::uint32_t>& sampled,
                             const std::vector<WeightValue>& contrib) {
  WeightValue s = 0;
  for (std::uint32_t c : sampled) {
    if (pool.conflict(e, c)) s += contrib[c];
  }
  return s;
}

std::vector<std::uint32_t> sampled_ids(const std::vector<WeightValue>& contrib, const Pool& pool,
                                       std::uint64_t k) {
  std::vector<std::uint32_t> out;
  const bool all = k >= pool.alive.size();
  for (std::uint32_t i = 0; i < contrib.size(); ++i) {
    if (contrib[i] != 0 || all) out.push_back(i);
  }
  return out;
}

// Weight levels L_i = w_min (a/b)^i (scaled by D) with L_i <= w_max.
struct Levels {
  bool empty = true;
  WeightValue w_min = 0;
  std::vector<WeightValue> thr;  // ceil(L_i)
  std::vector<BigInt> coef;      // a^i b^(I-i)
  BigInt b_pow;                  // b^I

  int band(WeightValue v) const {
    if (empty || v < thr[0]) return -1;
    return static_cast<int>(std::upper_bound(thr.begin(), thr.end(), v) - thr.begin()) - 1;
  }
};

Levels make_levels(const std::vector<WeightValue>& weights, const Rational& eps) {
  if (eps <= 0) throw ConfigError("epsilon must be positive");
  Levels lv;
  WeightValue lo = 0, hi = 0;
  for (WeightValue v : weights) {
    if (v <= 0) continue;
    if (lo == 0 || v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo == 0) return lv;
  lv.empty = false;
  lv.w_min = lo;
  const Rational growth = Rational(1) + eps;
  const BigInt a = boost::multiprecision::numerator(growth);
  const BigInt b = boost::multiprecision::denominator(growth);
  Rational level = Rational(to_bigint(lo));
  std::vector<BigInt> apow{1};
  while (level <= Rational(to_bigint(hi))) {
    const BigInt num = boost::multiprecision::numerator(level);
    const BigInt den = boost::multiprecision::denominator(level);
    lv.thr.push_back(to_weight_value((num + den - 1) / den));
    level *= growth;
    apow.push_back(apow.back() * a);
  }
  const std::size_t count = lv.thr.size();
  lv.b_pow = boost::multiprecision::pow(b, static_cast<unsigned>(count - 1));
  BigInt bpow = lv.b_pow;
  for (std::size_t i = 0; i < count; ++i) {
    lv.coef.push_back(apow[i] * bpow);
    if (i + 1 < count) bpow /= b;
  }
  return lv;
}

// Per-vertex scaled frequencies: w(p, q) = min(vp[p], vq[q]) for min_freq.
void vertex_values(const Dataset& P, const Dataset& Q, std::vector<WeightValue>& vp,
                   std::vector<WeightValue>& vq) {
  const WeightValue tp = P.total_records(), tq = Q.total_records();
  vp.resize(P.size());
  vq.resize(Q.size());
  for (std::size_t i = 0; i < P.size(); ++i) vp[i] = checked_mul(P.count(i), tq);
  for (std::size_t j = 0; j < Q.size(); ++j) vq[j] = checked_mul(Q.count(j), tp);
}

// Level numerators S(e) for the listed pool entries; score = w_min S / (b^I D).
std::vector<BigInt> level_scores(const Pool& pool, const Matching& M, const Levels& lv,
                                 const std::vector<std::size_t>& targets, QuadrantCounter* fast,
                                 const std::vector<WeightValue>& vp,
                                 const std::vector<WeightValue>& vq, unsigned threads) {
  std::vector<BigInt> out(targets.size(), BigInt(0));
  if (lv.empty) return out;
  const std::size_t levels = lv.thr.size();
  if (fast) {
    std::vector<std::vector<std::int64_t>> zeta(levels + 1, std::vector<std::int64_t>(targets.size(), 0));
    std::vector<char> pm(vp.size()), qm(vq.size());
    for (std::size_t i = 0; i < levels; ++i) {
      for (std::size_t a = 0; a < vp.size(); ++a) pm[a] = vp[a] >= lv.thr[i];
      for (std::size_t b = 0; b < vq.size(); ++b) qm[b] = vq[b] >= lv.thr[i];
      fast->refresh(M, &pm, &qm);
      for (std::size_t t = 0; t < targets.size(); ++t) zeta[i][t] = fast->count(pool.alive[targets[t]]);
    }
    for (std::size_t t = 0; t < targets.size(); ++t) {
      BigInt s = 0;
      for (std::size_t i = 0; i < levels; ++i) {
        const std::int64_t delta = zeta[i][t] - zeta[i + 1][t];
        if (delta) s += lv.coef[i] * delta;
      }
      out[t] = s;
    }
    return out;
  }
  std::vector<int> band(pool.alive.size());
  for (std::size_t c = 0; c < band.size(); ++c) band[c] = lv.band(pool.w[c]);
  parallel_for(targets.size(), threads, [&](std::size_t t) {
    std::vector<std::int64_t> delta(levels, 0);
    for (std::size_t c = 0; c < pool.alive.size(); ++c) {
      if (band[c] >= 0 && pool.conflict(targets[t], c)) ++delta[band[c]];
    }
    BigInt s = 0;
    for (std::size_t i = 0; i < levels; ++i) if (delta[i]) s += lv.coef[i] * delta[i];
    out[t] = s;
  });
  return out;
}

Rational level_value(const BigInt& s, const Levels& lv, WeightValue denom) {
  if (lv.empty) return Rational(0);
  return Rational(to_bigint(lv.w_min) * s, lv.b_pow * to_bigint(denom));
}

std::size_t index_of(const std::vector<Edge>& alive, Edge e) {
  auto it = std::lower_bound(alive.begin(), alive.end(), e);
  if (it == alive.end() || *it != e) throw ContractViolation("edge is not a survivor");
  return static_cast<std::size_t>(it - alive.begin());
}

void require_min_freq(const WeightSpec& w) {
  if (w.kind != WeightKind::min_freq) throw ConfigError("scaled scoring requires min weights");
}

}  // namespace

Rational sampled_score(Edge e, const Dataset& P, const Dataset& Q, const Matching& M,
                       const WeightSpec& w, std::uint64_t k, std::uint64_t seed) {
  require_survivor(e, P, Q, M);
  const WeightTable table(P, Q, w);
  Pool pool(P, Q, table, surviving_candidates(P, Q, M));
  Rng rng = Rng::stream(seed, "minconflict.sample");
  const auto contrib = draw_sample(pool, k, rng);
  const auto ids = sampled_ids(contrib, pool, k);
  const WeightValue s = sampled_estimate(pool, index_of(pool.alive, e), ids, contrib);
  return make_rational(s, checked_mul(table.denominator(), static_cast<WeightValue>(k)));
}

Rational scaled_score(Edge e, const Dataset& P, const Dataset& Q, const Matching& M,
                      const Rational& eps) {
  require_survivor(e, P, Q, M);
  const WeightSpec spec{WeightKind::min_freq, std::nullopt};
  const WeightTable table(P, Q, spec);
  Pool pool(P, Q, table, surviving_candidates(P, Q, M));
  const Levels lv = make_levels(pool.w, eps);
  std::vector<WeightValue> vp, vq;
  vertex_values(P, Q, vp, vq);
  std::optional<QuadrantCounter> fast;
  if (P.dim() == 2 && general_position(P) && general_position(Q)) fast.emplace(P, Q);
  const auto s = level_scores(pool, M, lv, {index_of(pool.alive, e)}, fast ? &*fast : nullptr,
                              vp, vq, 1);
  return level_value(s[0], lv, table.denominator());
}

// ---------------------------------------------------------------------------
// Greedy driver

namespace {

template <class Score>
std::size_t pick(const std::vector<Score>& score, const std::vector<WeightValue>& w) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < score.size(); ++i) {
    if (score[i] < score[best] || (score[i] == score[best] && w[i] > w[best])) best = i;
  }
  return best;
}

// Commits alive[chosen] and returns the indices (into the old alive list) of
// entries that survive, plus the killed ones.
void commit(Pool& pool, Matching& M, std::size_t chosen, std::vector<std::size_t>& keep,
            std::vector<std::size_t>& killed) {
  const Edge e = pool.alive[chosen];
  M.edges.push_back(e);
  keep.clear();
  killed.clear();
  for (std::size_t i = 0; i < pool.alive.size(); ++i) {
    const Edge c = pool.alive[i];
    if (c.p == e.p || c.q == e.q || conflict_unchecked(pool.P, pool.Q, c, e)) {
      killed.push_back(i);
    } else {
      keep.push_back(i);
    }
  }
}

template <class T>
void compact(std::vector<T>& v, const std::vector<std::size_t>& keep) {
  std::vector<T> out;
  out.reserve(keep.size());
  for (std::size_t i : keep) out.push_back(std::move(v[i]));
  v = std::move(out);
}

}  // namespace

Matching greedy_min_conflict(const Dataset& P, const Dataset& Q, const WeightSpec& w,
                             const Mode& mode, unsigned threads) {
  if (P.dim() != Q.dim()) throw StructuralError("P and Q dimensions differ");
  Matching M;
  if (P.empty() || Q.empty()) return M;
  if (mode.kind == ScoreKind::scaled) require_min_freq(w);
  if (mode.kind == ScoreKind::scaled && mode.eps <= 0) throw ConfigError("epsilon must be positive");
  if (mode.kind == ScoreKind::sampled && mode.k == 0) throw ConfigError("sample size k must be at least 1");

  const WeightTable table(P, Q, w);
  Pool pool(P, Q, table, surviving_candidates(P, Q, M));
  const bool fast_ok = P.dim() == 2 && general_position(P) && general_position(Q);
  std::optional<QuadrantCounter> fast;
  if (fast_ok) fast.emplace(P, Q);
  std::vector<std::size_t> keep, killed;

  switch (mode.kind) {
    case ScoreKind::exact_count: {
      if (fast_ok && w.kind == WeightKind::unit) {
        std::vector<std::int64_t> score;
        while (!pool.alive.empty()) {
          fast->refresh(M);
          score.assign(pool.alive.size(), 0);
          for (std::size_t i = 0; i < score.size(); ++i) score[i] = fast->count(pool.alive[i]);
          commit(pool, M, pick(score, pool.w), keep, killed);
          compact(pool.alive, keep);
          compact(pool.w, keep);
        }
        break;
      }
      const std::size_t n = pool.alive.size();
      std::vector<WeightValue> score(n, 0);
      parallel_for(n, threads, [&](std::size_t a) {
        WeightValue s = 0;
        for (std::size_t b = 0; b < n; ++b) if (pool.conflict(a, b)) s += pool.w[b];
        score[a] = s;
      });
      while (!pool.alive.empty()) {
        commit(pool, M, pick(score, pool.w), keep, killed);
        parallel_for(keep.size(), threads, [&](std::size_t t) {
          const std::size_t s = keep[t];
          for (std::size_t k : killed) if (pool.conflict(s, k)) score[s] -= pool.w[k];
        });
        compact(pool.alive, keep);
        compact(pool.w, keep);
        compact(score, keep);
      }
      break;
    }
    case ScoreKind::sampled: {
      for (std::uint64_t iter = 0; !pool.alive.empty(); ++iter) {
        Rng rng = Rng::stream(mode.seed, "minconflict.sample." + std::to_string(iter));
        const auto contrib = draw_sample(pool, mode.k, rng);
        const auto ids = sampled_ids(contrib, pool, mode.k);
        std::vector<WeightValue> score(pool.alive.size(), 0);
        parallel_for(score.size(), threads,
                     [&](std::size_t i) { score[i] = sampled_estimate(pool, i, ids, contrib); });
        commit(pool, M, pick(score, pool.w), keep, killed);
        compact(pool.alive, keep);
        compact(pool.w, keep);
      }
      break;
    }
    case ScoreKind::scaled: {
      std::vector<WeightValue> vp, vq;
      vertex_values(P, Q, vp, vq);
      while (!pool.alive.empty()) {
        const Levels lv = make_levels(pool.w, mode.eps);
        std::vector<std::size_t> all(pool.alive.size());
        std::iota(all.begin(), all.end(), 0);
        const auto score = level_scores(pool, M, lv, all, fast ? &*fast : nullptr, vp, vq, threads);
        commit(pool, M, pick(score, pool.w), keep, killed);
        compact(pool.alive, keep);
        compact(pool.w, keep);
      }
      break;
    }
  }
  M.sort();
  return M;
}

}  // namespace opmatch::minconflict
