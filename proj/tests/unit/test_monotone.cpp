#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.h"
#include "opmatch/exact.h"
#include "opmatch/monotone.h"
#include "opmatch/oracle.h"

using namespace opmatch;
using namespace opmatch::monotone;
using rangeindex::IndexKind;

namespace {
const IndexKind kKinds[] = {IndexKind::range_tree, IndexKind::kd_tree, IndexKind::naive};
}

TEST_CASE("staircase and anti-chain") {
  Dataset stair = testing::unit_points({{1, 1}, {2, 2}, {3, 3}});
  WeightTable w(stair, stair, {});
  for (IndexKind kind : kKinds) {
    Chain c = heaviest_monotone_chain(stair, stair, Matching{}, Direction::increasing, w, kind);
    CHECK(c.edges == std::vector<Edge>{{0, 0}, {1, 1}, {2, 2}});
    CHECK(c.weight == 3);
  }
  Dataset anti = testing::unit_points({{1, 3}, {2, 2}, {3, 1}});
  WeightTable wa(anti, anti, {});
  Chain c = heaviest_monotone_chain(anti, anti, Matching{}, Direction::increasing, wa, IndexKind::range_tree);
  CHECK(c.edges.size() == 1);
  Chain d = heaviest_monotone_chain(anti, anti, Matching{}, Direction::decreasing, wa, IndexKind::range_tree);
  CHECK(d.edges.size() == 3);

  GreedyResult g = greedy_monotone(stair, stair, {}, Mode::inc, IndexKind::range_tree);
  CHECK(g.matching.edges == std::vector<Edge>{{0, 0}, {1, 1}, {2, 2}});
  CHECK(g.chain_lengths == std::vector<std::size_t>{3});
}

TEST_CASE("same first coordinate never chains") {
  // (1,1) and (1,2) share x; a chain through both would be invalid.
  Dataset P = testing::unit_points({{1, 1}, {1, 2}});
  Dataset Q = testing::unit_points({{1, 1}, {2, 2}});
  WeightTable w(P, Q, {});
  for (IndexKind kind : kKinds) {
    Chain c = heaviest_monotone_chain(P, Q, Matching{}, Direction::increasing, w, kind);
    CHECK(c.edges.size() == 1);
  }
}

TEST_CASE("chain weight equals exhaustive chain enumeration, all index kinds agree") {
  Rng rng(31);
  for (int t = 0; t < 150; ++t) {
    const std::size_t d = t % 4 == 3 ? 3 : 2;
    Dataset P = testing::random_dataset(rng, 2 + rng.below(6), d, t % 2 ? 4 : 12);
    Dataset Q = testing::random_dataset(rng, 2 + rng.below(6), d, t % 2 ? 4 : 12);
    // random valid partial matching
    Matching M;
    MatchedFlags used(P.size(), Q.size());
    for (int tries = 0; tries < 3; ++tries) {
      Edge e{static_cast<std::uint32_t>(rng.below(P.size())), static_cast<std::uint32_t>(rng.below(Q.size()))};
      if (used.free(e) && !conflicts_with_any(e, M, P, Q)) {
        M.edges.push_back(e);
        used.add(e);
      }
    }
    const WeightSpec spec{static_cast<WeightKind>(t % 3), std::nullopt};
    WeightTable w(P, Q, spec);
    for (const auto& mask : all_masks(d)) {
      const Rational truth = oracle::max_chain_weight(P, Q, M, mask, spec);
      for (IndexKind kind : kKinds) {
        std::vector<ChainCell> cells;
        Chain c = heaviest_monotone_chain(P, Q, M, mask, w, kind, &cells);
        REQUIRE(w.to_rational(c.weight) == truth);
        Matching both = M;
        both.edges.insert(both.edges.end(), c.edges.begin(), c.edges.end());
        CHECK(is_order_preserving(both, P, Q));
        CHECK(w.to_rational(w.sum(Matching{c.edges})) == truth);
        for (const ChainCell& cell : cells) {
          CHECK(cell.value >= w.at(cell.edge));
          if (cell.predecessor) {
            for (std::size_t k = 0; k < d; ++k) {
              auto sgn = [&](Coord v) { return mask[k] ? -v : v; };
              CHECK(sgn(P.coord(cell.predecessor->p, k)) < sgn(P.coord(cell.edge.p, k)));
              CHECK(sgn(Q.coord(cell.predecessor->q, k)) < sgn(Q.coord(cell.edge.q, k)));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("greedy: validity, approximation bound, progress") {
  Rng rng(12);
  for (int t = 0; t < 120; ++t) {
    const std::size_t d = t % 6 == 5 ? 3 : 2;
    Dataset P = testing::random_general(rng, 1 + rng.below(7), d, 20);
    Dataset Q = testing::random_general(rng, 1 + rng.below(7), d, 20);
    const WeightSpec spec{static_cast<WeightKind>(t % 3), std::nullopt};
    GreedyResult g = greedy_monotone(P, Q, spec, Mode::mix, IndexKind::range_tree);
    REQUIRE(is_order_preserving(g.matching, P, Q));
    CHECK(g.chain_lengths.size() <= std::min(P.size(), Q.size()));
    for (std::size_t len : g.chain_lengths) CHECK(len >= 1);
    const Rational opt = exact::exact_max_matching(P, Q, spec).weight;
    const Rational got = matching_weight(g.matching, P, Q, spec);
    // got >= opt / n^(1/d) <=> got^d * n >= opt^d
    const Rational n(static_cast<long>(std::min(P.size(), Q.size())));
    Rational lhs = 1, rhs = 1;
    for (std::size_t k = 0; k < d; ++k) { lhs *= got; rhs *= opt; }
    CHECK(lhs * n >= rhs);
    for (IndexKind kind : {IndexKind::kd_tree, IndexKind::naive}) {
      GreedyResult h = greedy_monotone(P, Q, spec, Mode::mix, kind);
      CHECK(matching_weight(h.matching, P, Q, spec) == got);
    }
  }
}
