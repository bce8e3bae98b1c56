#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <set>

#include "opmatch/datagen.h"
#include "opmatch/errors.h"
#include "opmatch/exact.h"
#include "opmatch/oracle.h"

using namespace opmatch;
using namespace opmatch::datagen;
using opmatch::exact::ExactResult;
using opmatch::exact::SearchBudget;
using opmatch::exact::exact_max_matching;

namespace {

GenParams params(std::size_t n, std::uint64_t seed) {
  GenParams p;
  p.superset_size = n;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("parameter validation") {
  GenParams p = params(10, 1);
  CHECK_NOTHROW(validate(p));
  p.beta = 1;
  CHECK_THROWS_AS(validate(p), ConfigError);
  p = params(10, 1);
  p.beta = 0;
  CHECK_THROWS_AS(validate(p), ConfigError);
  p = params(10, 1);
  p.p_bion = 1;
  CHECK_NOTHROW(validate(p));
  p.p_bion = make_rational(3, 2);
  CHECK_THROWS_AS(validate(p), ConfigError);
  p = params(10, 1);
  p.f_min = 0;
  CHECK_THROWS_AS(validate(p), ConfigError);
  p = params(10, 1);
  p.f_min = 7;
  p.f_max = 6;
  CHECK_THROWS_AS(validate(p), ConfigError);
  p = params(10, 1);
  p.extent = {10};
  CHECK_THROWS_AS(validate(p), ConfigError);
}

TEST_CASE("superset") {
  GenParams p = params(1, 3);
  Dataset one = generate_superset(p);
  REQUIRE(one.size() == 1);
  CHECK(one.count(0) >= 1);
  CHECK(one.count(0) <= 100);

  p = params(200, 5);
  p.f_min = p.f_max = 5;
  Dataset r = generate_superset(p);
  CHECK(r.size() == 200);
  for (const Point& x : r) {
    CHECK(x.raw_count == 5);
    CHECK(x.coords[0] >= 0);
    CHECK(x.coords[0] < 1000);
    CHECK(x.coords[1] >= 0);
    CHECK(x.coords[1] < 1000);
  }
  CHECK(generate_superset(p) == r);
  p.seed = 6;
  CHECK_FALSE(generate_superset(p) == r);

  // Every cell of a full grid.
  p = params(12, 9);
  p.extent = {3, 4};
  CHECK(generate_superset(p).size() == 12);
  p.superset_size = 13;
  CHECK_THROWS_AS(generate_superset(p), CapacityError);

  p = params(20, 2);
  p.dim = 3;
  p.extent = {5, 5, 5};
  Dataset r3 = generate_superset(p);
  CHECK(r3.dim() == 3);
  CHECK(r3.size() == 20);
}

TEST_CASE("superset counts follow the uniform law") {
  GenParams p = params(10000, 11);
  Dataset r = generate_superset(p);
  double sum = 0;
  for (const Point& x : r) sum += static_cast<double>(x.raw_count);
  const double mean = sum / 10000.0;
  const double sigma = std::sqrt((100.0 * 100.0 - 1.0) / 12.0 / 10000.0);
  CHECK(std::abs(mean - 50.5) < 3 * sigma);
}

TEST_CASE("case 1") {
  Dataset R = generate_superset(params(60, 1));
  Sample s = sample_case1(R, make_rational(3, 5), make_rational(7, 10), 1);
  CHECK(s.P == R);
  CHECK(s.truth.size() == s.Q.size());
  for (std::size_t j = 0; j < s.Q.size(); ++j) {
    REQUIRE(s.truth[j]);
    auto i = R.find(*s.truth[j]);
    REQUIRE(i);
    CHECK(s.Q.count(j) <= R.count(*i));
    CHECK(s.Q.count(j) >= 1);
  }
  Sample again = sample_case1(R, make_rational(3, 5), make_rational(7, 10), 1);
  CHECK(again.Q == s.Q);

  Sample all = sample_case1(R, Rational(1), Rational(1), 4);
  CHECK(all.Q == R);

  // Mean |Q| over 200 seeds: Binomial(60, 0.6) thinned by the rare all-zero
  // binomial draw, i.e. essentially 36 with sd sqrt(60*.6*.4)/sqrt(200).
  double total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    total += static_cast<double>(sample_case1(R, make_rational(3, 5), make_rational(7, 10), seed).Q.size());
  }
  CHECK(std::abs(total / 200 - 36.0) < 3 * std::sqrt(60 * 0.6 * 0.4 / 200));
}

TEST_CASE("empty sample is signalled") {
  GenParams p = params(1, 1);
  p.f_min = p.f_max = 1;
  Dataset R = generate_superset(p);
  bool saw_empty = false;
  for (std::uint64_t seed = 0; seed < 50 && !saw_empty; ++seed) {
    try {
      sample_case1(R, make_rational(1, 10), Rational(1), seed);
    } catch (const EmptySampleError&) {
      saw_empty = true;
    }
  }
  CHECK(saw_empty);
}

TEST_CASE("case 2") {
  Dataset R = generate_superset(params(100, 2));
  const Rational beta = make_rational(3, 5), pb = make_rational(7, 10);
  Sample s = sample_case2(R, beta, pb, 3);
  for (std::size_t j = 0; j < s.Q.size(); ++j) {
    REQUIRE(s.truth[j]);
    CHECK(R.find(*s.truth[j]).has_value());
  }
  Sample b = sample_case2(R, beta, pb, 3);
  CHECK(b.P == s.P);
  CHECK(b.Q == s.Q);

  Sample full = sample_case2(R, Rational(1), Rational(1), 3);
  CHECK(full.P == R);
  CHECK(full.Q == R);

  double np = 0, nq = 0, common = 0;
  const int seeds = 200;
  for (int seed = 0; seed < seeds; ++seed) {
    Sample t = sample_case2(R, beta, pb, static_cast<std::uint64_t>(seed));
    np += static_cast<double>(t.P.size());
    nq += static_cast<double>(t.Q.size());
    for (const Point& q : t.Q) common += t.P.find(q.coords) ? 1 : 0;
  }
  const double sd60 = std::sqrt(100 * 0.6 * 0.4 / seeds);
  const double sd36 = std::sqrt(100 * 0.36 * 0.64 / seeds);
  CHECK(std::abs(np / seeds - 60) < 3 * sd60);
  CHECK(std::abs(nq / seeds - 60) < 3 * sd60);
  CHECK(std::abs(common / seeds - 36) < 3 * sd36);
}

TEST_CASE("permutation points") {
  Dataset id = permutation_to_points({1, 2, 3});
  REQUIRE(id.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(id[i].coords == Coords{static_cast<Coord>(i + 1), static_cast<Coord>(i + 1)});
    CHECK(id[i].raw_count == 1);
  }
  Dataset sw = permutation_to_points({2, 1});
  CHECK(sw[0].coords == Coords{1, 2});
  CHECK(sw[1].coords == Coords{2, 1});
  CHECK_THROWS_AS(permutation_to_points({1, 1}), ValidationError);
  CHECK_THROWS_AS(permutation_to_points({0, 1}), ValidationError);
  CHECK_THROWS_AS(permutation_to_points({1, 3}), ValidationError);
}

TEST_CASE("pattern embedding matches containment for all small pairs") {
  for (std::size_t k = 1; k <= 3; ++k) {
    std::vector<int> s(k);
    std::iota(s.begin(), s.end(), 1);
    do {
      for (std::size_t n = k; n <= 5; ++n) {
        std::vector<int> t(n);
        std::iota(t.begin(), t.end(), 1);
        do {
          const ExactResult r = exact_max_matching(permutation_to_points(t), permutation_to_points(s),
                                                   WeightSpec{});
          CHECK((r.matching.size() == k) == oracle::contains_pattern(t, s));
        } while (std::next_permutation(t.begin(), t.end()));
      }
    } while (std::next_permutation(s.begin(), s.end()));
  }
}

TEST_CASE("sum decomposability") {
  CHECK(sum_decomposable({1, 2, 3}));
  CHECK(sum_decomposable({1, 3, 2}));
  CHECK(sum_decomposable({2, 1, 3}));
  CHECK_FALSE(sum_decomposable({2, 3, 1}));
  CHECK_FALSE(sum_decomposable({3, 1, 2}));
  CHECK_FALSE(sum_decomposable({3, 2, 1}));
  CHECK_FALSE(sum_decomposable({1}));
}

TEST_CASE("permutation blocks") {
  for (std::size_t b = 0; b < 6; ++b) {
    BlockInstance inst = permutation_blocks(3, b, 2);
    CHECK(inst.P.size() == 18);
    CHECK(inst.Q.size() == 3);
    std::set<Coord> xs, ys;
    for (const Point& p : inst.P) {
      xs.insert(p.coords[0]);
      ys.insert(p.coords[1]);
      CHECK(p.raw_count == 2);
    }
    CHECK(xs.size() == 18);  // one point per grid row and column
    CHECK(ys.size() == 18);
    for (std::size_t j = 0; j < 3; ++j) CHECK(inst.P.find(inst.Q[j].coords).has_value());
    // Exactly one full-size embedding exists: the chosen block itself.
    const ExactResult r = exact_max_matching(inst.P, inst.Q, WeightSpec{}, SearchBudget{18, 200'000'000, {}});
    REQUIRE(r.proof_of_optimality);
    REQUIRE(r.matching.size() == 3);
    for (Edge e : r.matching.edges) CHECK(inst.P[e.p].coords == inst.Q[e.q].coords);
  }
  CHECK_THROWS_AS(permutation_blocks(3, 6), ConfigError);
}
