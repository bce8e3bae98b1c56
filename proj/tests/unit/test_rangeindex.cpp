#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "opmatch/errors.h"
#include "opmatch/rangeindex.h"
#include "opmatch/rng.h"

using namespace opmatch;
using namespace opmatch::rangeindex;

namespace {

const IndexKind kAll[] = {IndexKind::range_tree, IndexKind::kd_tree, IndexKind::naive};

std::vector<Coord> random_keys(Rng& rng, std::size_t n, std::size_t dim, int grid) {
  std::vector<Coord> keys(n * dim);
  for (auto& k : keys) k = rng.uniform_int(0, grid - 1);
  return keys;
}

Box random_box(Rng& rng, std::size_t dim, int grid) {
  Box b;
  for (std::size_t k = 0; k < dim; ++k) {
    b.bound.push_back(rng.uniform_int(-1, grid));
    b.strict.push_back(static_cast<char>(rng.below(2)));
  }
  return b;
}

}  // namespace

TEST_CASE("empty and single-candidate indexes") {
  for (IndexKind kind : kAll) {
    auto empty = build(kind, 3, {});
    CHECK_FALSE(empty->query_max(Box::strict_below({9, 9, 9})).has_value());
    auto one = build(kind, 3, {1, 2, 3});
    auto hit = one->query_max(Box::strict_below({9, 9, 9}));
    REQUIRE(hit.has_value());
    CHECK(hit->id == 0);
    CHECK(hit->value == 0);
    CHECK_FALSE(one->query_max(Box::strict_below({1, 9, 9})).has_value());
  }
}

TEST_CASE("update semantics") {
  for (IndexKind kind : kAll) {
    auto idx = build(kind, 3, {1, 1, 1, 5, 5, 5});
    idx->update(0, 5);
    idx->update(0, 5);
    auto hit = idx->query_max(Box::strict_below({2, 2, 2}));
    REQUIRE(hit.has_value());
    CHECK(*hit == Hit{0, 5});
    CHECK(idx->query_max(Box::strict_below({9, 9, 9}))->value >= 5);
    CHECK_THROWS_AS(idx->update(0, 4), ContractViolation);
    CHECK_THROWS_AS(idx->update(7, 4), StructuralError);
    CHECK(idx->audit());
  }
  CHECK(parse_index_kind("kd-tree") == IndexKind::kd_tree);
  CHECK_THROWS_AS(parse_index_kind("btree"), ConfigError);
}

TEST_CASE("all three kinds agree with each other under random interleavings") {
  Rng rng(99);
  for (int round = 0; round < 40; ++round) {
    const std::size_t dim = 1 + round % 4;
    const std::size_t n = 1 + rng.below(300);
    const int grid = round % 2 ? 8 : 1000;
    auto keys = random_keys(rng, n, dim, grid);
    std::vector<std::unique_ptr<Index>> idx;
    for (IndexKind kind : kAll) idx.push_back(build(kind, dim, keys));
    std::vector<WeightValue> cur(n, 0);
    for (int step = 0; step < 500; ++step) {
      if (rng.below(2)) {
        const auto id = static_cast<std::uint32_t>(rng.below(n));
        cur[id] += static_cast<WeightValue>(rng.below(7));
        for (auto& i : idx) i->update(id, cur[id]);
      } else {
        Box b = random_box(rng, dim, grid);
        auto a = idx[0]->query_max(b);
        REQUIRE(a == idx[1]->query_max(b));
        REQUIRE(a == idx[2]->query_max(b));
      }
    }
    for (auto& i : idx) CHECK(i->audit());
  }
}

TEST_CASE("node counts follow the construction recurrences") {
  Rng rng(5);
  const std::size_t n = 1000;
  auto keys = random_keys(rng, n, 3, 1 << 20);
  auto rt = build(IndexKind::range_tree, 3, keys);
  auto kd = build(IndexKind::kd_tree, 3, keys);
  const double lg = std::log2(static_cast<double>(n)) + 1;
  CHECK(kd->node_count() == n);
  CHECK(rt->node_count() >= n);
  CHECK(static_cast<double>(rt->node_count()) <= 2.0 * n * lg * lg);
}

TEST_CASE("range-tree visits grow polylogarithmically") {
  Rng rng(6);
  auto visits_per_query = [&](std::size_t n) {
    auto idx = build(IndexKind::range_tree, 3, random_keys(rng, n, 3, 1 << 20));
    for (int q = 0; q < 200; ++q) idx->query_max(random_box(rng, 3, 1 << 20));
    return static_cast<double>(idx->visits()) / 200.0;
  };
  const double small = visits_per_query(1000);
  const double large = visits_per_query(16000);
  const double bound = std::pow(std::log2(16000.0) + 1, 3);
  CHECK(large <= bound);
  CHECK(large < small * 4);
}
