#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.h"
#include "opmatch/errors.h"
#include "opmatch/oracle.h"

using namespace opmatch;
using testing::make;
using testing::unit_points;

namespace {

Point pt(Coords c) { return Point{std::move(c), 1, Rational(1)}; }

// Three edges: e2 = (1,2) is in y-conflict with e1 = (0,0) and in
// x-conflict with e3 = (2,1).
struct Figure1 {
  Dataset P = unit_points({{0, 0}, {2, 2}, {3, 20}});
  Dataset Q = unit_points({{1, 10}, {5, 5}, {4, 21}});
};

}  // namespace

TEST_CASE("dominance") {
  CHECK(dominates(pt({1, 1}), pt({2, 5})));
  CHECK(dominates(pt({1, 3}), pt({1, 2})));
  CHECK_FALSE(dominates(pt({2, 2}), pt({2, 2})));
  CHECK_FALSE(dominates(pt({2, 5}), pt({1, 1})));
  CHECK_THROWS_AS(dominates(pt({1, 2}), pt({1, 2, 3})), StructuralError);
  // d = 3: later axes compare reversed on a tie in the first.
  CHECK(dominates(pt({1, 3, 3}), pt({1, 2, 2})));
  CHECK_FALSE(dominates(pt({1, 3, 1}), pt({1, 2, 2})));
}

TEST_CASE("dominance is irreflexive and transitive on distinct-x chains") {
  Rng rng(11);
  for (int t = 0; t < 300; ++t) {
    std::vector<Point> v;
    for (int i = 0; i < 3; ++i) v.push_back(pt({rng.uniform_int(0, 20), rng.uniform_int(0, 3)}));
    CHECK_FALSE(dominates(v[0], v[0]));
    if (v[0].coords[0] < v[1].coords[0] && v[1].coords[0] < v[2].coords[0]) {
      if (dominates(v[0], v[1]) && dominates(v[1], v[2])) CHECK(dominates(v[0], v[2]));
    }
  }
}

TEST_CASE("edges_conflict examples") {
  Dataset P = unit_points({{1, 1}, {2, 2}});
  Dataset Q = unit_points({{1, 1}, {2, 2}});
  CHECK_FALSE(edges_conflict({0, 0}, {1, 1}, P, Q));
  CHECK(edges_conflict({0, 1}, {1, 0}, P, Q));
  CHECK_THROWS_AS(edges_conflict({0, 0}, {0, 1}, P, Q), ContractViolation);
  CHECK_THROWS_AS(edges_conflict({0, 0}, {1, 5}, P, Q), StructuralError);
}

TEST_CASE("tie on one side only is a conflict") {
  Dataset P = unit_points({{1, 1}, {1, 2}});
  Dataset Q = unit_points({{1, 1}, {2, 2}});
  CHECK(edges_conflict({0, 0}, {1, 1}, P, Q));
  Dataset Q2 = unit_points({{3, 1}, {3, 2}});
  CHECK_FALSE(edges_conflict({0, 0}, {1, 1}, P, Q2));
}

TEST_CASE("edges_conflict agrees with monotone-map realizability on random 4-point instances") {
  Rng rng(5);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t d = 2 + t % 2;
    Dataset P = testing::random_dataset(rng, 2, d, 3);
    Dataset Q = testing::random_dataset(rng, 2, d, 3);
    if (P.size() < 2 || Q.size() < 2) continue;
    for (Edge a : {Edge{0, 0}, Edge{0, 1}}) {
      Edge b{1, a.q == 0 ? 1u : 0u};
      const bool realizable = oracle::realizable(Matching{{a, b}}, P, Q);
      REQUIRE(edges_conflict(a, b, P, Q) == !realizable);
      REQUIRE(edges_conflict(a, b, P, Q) == edges_conflict(b, a, P, Q));
    }
  }
}

TEST_CASE("in general position, conflict is the complement of same-quadrant") {
  Rng rng(8);
  for (int t = 0; t < 500; ++t) {
    Dataset P = testing::random_general(rng, 2, 2);
    Dataset Q = testing::random_general(rng, 2, 2);
    Edge a{0, static_cast<std::uint32_t>(t % 2)}, b{1, static_cast<std::uint32_t>(1 - t % 2)};
    auto quad = [](const Dataset& D, std::uint32_t from, std::uint32_t to) {
      return std::pair{D.coord(to, 0) > D.coord(from, 0), D.coord(to, 1) > D.coord(from, 1)};
    };
    const bool same = quad(P, a.p, b.p) == quad(Q, a.q, b.q);
    CHECK(edges_conflict(a, b, P, Q) == !same);
  }
}

TEST_CASE("is_order_preserving") {
  Dataset P = unit_points({{1, 1}, {2, 2}, {3, 3}});
  CHECK(is_order_preserving(Matching{}, P, P));
  CHECK(is_order_preserving(Matching{{{0, 0}, {1, 1}, {2, 2}}}, P, P));
  CHECK_FALSE(is_order_preserving(Matching{{{0, 0}, {1, 0}}}, P, P));
  CHECK_THROWS_AS(is_order_preserving(Matching{{{0, 7}}}, P, P), StructuralError);

  Figure1 f;
  CHECK_FALSE(is_order_preserving(Matching{{{0, 0}, {1, 2}, {2, 1}}}, f.P, f.Q));
  CHECK(edges_conflict({0, 0}, {1, 2}, f.P, f.Q));
  CHECK(edges_conflict({1, 2}, {2, 1}, f.P, f.Q));
  CHECK_FALSE(edges_conflict({0, 0}, {2, 1}, f.P, f.Q));
}

TEST_CASE("order-preserving matchings sorted by P.x give non-conflicting Q.x order") {
  Rng rng(21);
  for (int t = 0; t < 300; ++t) {
    Dataset P = testing::random_dataset(rng, 5, 2, 6);
    Dataset Q = testing::random_dataset(rng, 5, 2, 6);
    Matching m;
    MatchedFlags used(P.size(), Q.size());
    for (std::uint32_t i = 0; i < P.size(); ++i) {
      Edge e{i, static_cast<std::uint32_t>(rng.below(Q.size()))};
      if (used.free(e) && !conflicts_with_any(e, m, P, Q)) {
        m.edges.push_back(e);
        used.add(e);
      }
    }
    REQUIRE(is_order_preserving(m, P, Q));
    CHECK(oracle::realizable(m, P, Q));
    for (std::size_t i = 1; i < m.size(); ++i) {
      const Edge a = m.edges[i - 1], b = m.edges[i];
      if (P.coord(a.p, 0) < P.coord(b.p, 0)) CHECK(Q.coord(a.q, 0) < Q.coord(b.q, 0));
    }
  }
}

TEST_CASE("edge weights") {
  Point p{{0, 0}, 3, make_rational(3, 10)};
  Point q{{0, 0}, 2, make_rational(2, 10)};
  CHECK(edge_weight(p, q, {WeightKind::min_freq, {}}) == make_rational(1, 5));
  CHECK(edge_weight(p, q, {WeightKind::kappa_diff, Rational(1)}) == make_rational(9, 10));
  CHECK(edge_weight(p, q, {WeightKind::unit, {}}) == 1);
  CHECK_THROWS_AS(edge_weight(p, q, {WeightKind::kappa_diff, make_rational(1, 20)}), ConfigError);
  CHECK_THROWS_AS(edge_weight(p, q, WeightSpec{WeightKind::kappa_diff, std::nullopt}), ConfigError);
}

TEST_CASE("matching weight and weight table") {
  Dataset P = unit_points({{1, 1}, {2, 2}, {3, 3}});
  CHECK(matching_weight(Matching{}, P, P, {}) == 0);
  CHECK(matching_weight(Matching{{{0, 0}, {1, 1}, {2, 2}}}, P, P, {}) == 3);

  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    Dataset A = testing::random_dataset(rng, 6, 2, 5, 9);
    Dataset B = testing::random_dataset(rng, 6, 2, 5, 9);
    for (WeightKind kind : {WeightKind::unit, WeightKind::min_freq, WeightKind::kappa_diff}) {
      WeightTable table(A, B, {kind, {}});
      const WeightSpec spec = resolve({kind, {}}, A, B);
      Matching m;
      Rational fold = 0;
      for (std::uint32_t i = 0; i < A.size() && i < B.size(); ++i) {
        m.edges.push_back({i, i});
        fold += edge_weight(A[i], B[i], spec);
        CHECK(table.to_rational(table(i, i)) == edge_weight(A[i], B[i], spec));
      }
      CHECK(matching_weight(m, A, B, {kind, {}}) == fold);
      CHECK(table.to_rational(table.sum(m)) == fold);
    }
  }
}

TEST_CASE("default kappa is the max frequency") {
  Dataset P = make(2, {{{0, 0}, 3}, {{1, 1}, 1}});
  Dataset Q = make(2, {{{0, 0}, 1}, {{1, 1}, 1}});
  CHECK(default_kappa(P, Q) == make_rational(3, 4));
  CHECK(resolve({WeightKind::kappa_diff, {}}, P, Q).kappa == make_rational(3, 4));
}

TEST_CASE("dataset construction") {
  Dataset d = make(2, {{{2, 1}, 3}, {{1, 5}, 2}, {{2, 1}, 5}});
  REQUIRE(d.size() == 2);
  CHECK(d[0].coords == Coords{1, 5});
  CHECK(d[1].raw_count == 8);
  CHECK(d.total_records() == 10);
  CHECK(d[0].freq + d[1].freq == 1);
  CHECK(d.find(Coords{2, 1}) == std::optional<std::size_t>(1));
  CHECK_FALSE(d.find(Coords{9, 9}).has_value());
  CHECK_THROWS_AS(Dataset::from_rows(2, {{{1, 1}, 1}, {{1, 1}, 1}}, false), ValidationError);
  CHECK_THROWS_AS(Dataset::from_rows(2, {{{1}, 1}}), StructuralError);
  CHECK_THROWS_AS(Dataset::from_rows(2, {{{1, 2}, -1}}), ValidationError);
  CHECK(parse_weight_kind("kappa-diff") == WeightKind::kappa_diff);
  CHECK_THROWS_AS(parse_weight_kind("nope"), ConfigError);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("0.25") == make_rational(1, 4));
  CHECK(parse_rational("-1.5e1") == -15);
  CHECK(parse_rational("3/6") == make_rational(1, 2));
  CHECK_THROWS_AS(parse_rational("abc"), ValidationError);
  CHECK(format_rational(make_rational(6, 4)) == "3/2");
}
