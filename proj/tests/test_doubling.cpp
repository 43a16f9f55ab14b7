#include <doctest.h>

#include <sstream>
#include <vector>

#include "oslash/base_graphs.hpp"
#include "oslash/doubling.hpp"
#include "oslash/layered.hpp"
#include "test_util.hpp"

using namespace osl;

namespace {

// Exhaustive minimum-cover oracle: try every combination of half-ball
// centers of size 1, 2, ... until one covers B(x, r).
int cover_oracle(const DistanceMatrix& d, int x, const Rat& r) {
  const int n = d.n();
  Rat half = r / Rat(2);
  std::vector<int> ball;
  for (int u = 0; u < n; ++u)
    if (d.at(x, u) < r) ball.push_back(u);
  if (ball.size() <= 1) return 1;
  for (int k = 1; k <= n; ++k) {
    std::vector<int> comb(k);
    for (int i = 0; i < k; ++i) comb[i] = i;
    while (true) {
      bool covers = true;
      for (int u : ball) {
        bool hit = false;
        for (int c : comb)
          if (d.at(c, u) < half) { hit = true; break; }
        if (!hit) { covers = false; break; }
      }
      if (covers) return k;
      int i = k - 1;
      while (i >= 0 && comb[i] == n - k + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return n;
}

int lambda_oracle(const DistanceMatrix& d) {
  int best = 0;
  for (const Rat& r : critical_radii(d))
    for (int x = 0; x < d.n(); ++x) best = std::max(best, cover_oracle(d, x, r));
  return best;
}

DistanceMatrix scaled(const DistanceMatrix& d, const Rat& c) {
  DistanceMatrix out(d.n());
  for (int i = 0; i < d.n(); ++i)
    for (int j = 0; j < d.n(); ++j) out.at(i, j) = d.at(i, j) * c;
  return out;
}

}  // namespace

TEST_CASE("critical radii of a two-point space") {
  DistanceMatrix d(2);
  d.at(0, 1) = d.at(1, 0) = Rat(1);
  std::vector<Rat> radii = critical_radii(d);
  REQUIRE(radii.size() == 2);
  CHECK(radii[0] == Rat(1'000'000'001, 1'000'000'000));
  CHECK(radii[1] == Rat(2) * Rat(1'000'000'001, 1'000'000'000));
}

TEST_CASE("covering numbers on tiny spaces") {
  DistanceMatrix two(2);
  two.at(0, 1) = two.at(1, 0) = Rat(1);
  Rat eps(1'000'000'001, 1'000'000'000);
  CHECK(covering_number(two, 0, eps).lo == 2);
  CHECK(covering_number(two, 0, Rat(2) * eps).hi == 1);
  CHECK(doubling_constant(two).lambda_lo == 2);

  DistanceMatrix tri(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) tri.at(i, j) = Rat(i != j);
  DoublingReport rt = doubling_constant(tri);
  CHECK(rt.lambda_lo == 3);
  CHECK(rt.lambda_hi == 3);

  DistanceMatrix c4 = apsp(cayley_cycle(4, {1}).g);
  DoublingReport r4 = doubling_constant(c4);
  CHECK(r4.lambda_lo == 3);
  CHECK(r4.lambda_hi == 3);
  CHECK(r4.lambda_lo == lambda_oracle(c4));
}

TEST_CASE("doubling constant matches the exhaustive oracle on random graphs") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 12; ++trial) {
    STGraph g = testing::random_st_graph(rng, 8, 4);
    DistanceMatrix d = apsp(g.g);
    DoublingReport rep = doubling_constant(d, /*exact_limit=*/d.n());
    CAPTURE(trial);
    CHECK(rep.lambda_lo == rep.lambda_hi);
    CHECK(rep.lambda_lo == lambda_oracle(d));
  }
}

TEST_CASE("doubling report is scale invariant") {
  DistanceMatrix d = apsp(add_tails(stretch(k2().g)).st.g);
  DoublingReport base = doubling_constant(d);
  for (Rat c : {Rat(1, 2), Rat(3)}) {
    DoublingReport s = doubling_constant(scaled(d, c));
    CHECK(s.lambda_lo == base.lambda_lo);
    CHECK(s.lambda_hi == base.lambda_hi);
    REQUIRE(s.rows.size() == base.rows.size());
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
      CHECK(s.rows[i].lo == base.rows[i].lo);
      CHECK(s.rows[i].hi == base.rows[i].hi);
      CHECK(s.rows[i].radius == base.rows[i].radius * c);
    }
  }
}

TEST_CASE("bounded search still brackets the optimum") {
  DistanceMatrix d = apsp(power(add_tails(stretch(k2().g)).st, 2).g);
  // pick a midsize radius; with a starved node budget the bracket must
  // still contain the exact value computed with the full budget
  std::vector<Rat> radii = critical_radii(d);
  Rat r = radii[radii.size() / 2];
  CoverBounds exact = covering_number(d, 0, r, 80);
  REQUIRE(exact.exact());
  CoverBounds starved = covering_number(d, 0, r, 80, /*node_budget=*/3);
  CHECK(starved.lo <= exact.lo);
  CHECK(exact.hi <= starved.hi);
  CoverBounds greedy_only = covering_number(d, 0, r, /*exact_limit=*/0);
  CHECK(greedy_only.lo <= exact.lo);
  CHECK(exact.hi <= greedy_only.hi);
}

TEST_CASE("doubling of the K2 family is exact and stable across depth") {
  STGraph gt = add_tails(stretch(k2().g)).st;
  DistanceMatrix d1 = apsp(power(gt, 1).g);
  DoublingReport r1 = doubling_constant(d1);
  CHECK(r1.lambda_lo == r1.lambda_hi);
  CHECK(r1.lambda_lo == lambda_oracle(d1));
  CHECK(r1.lambda_lo == 5);

  // depth 2: exact needs the full limit; the default-limit run must bracket it
  DistanceMatrix d2 = apsp(power(gt, 2).g);
  DoublingReport full = doubling_constant(d2, d2.n());
  CHECK(full.lambda_lo == full.lambda_hi);
  CHECK(full.lambda_lo == 6);
  DoublingReport dflt = doubling_constant(d2, 30);
  CHECK(dflt.lambda_lo <= full.lambda_lo);
  CHECK(full.lambda_hi <= dflt.lambda_hi);

  std::ostringstream csv;
  write_doubling_csv(csv, r1);
  CHECK(csv.str().find("lambda_lo") != std::string::npos);
}

TEST_CASE("covering lemma ratios stay below 1") {
  STGraph gt = add_tails(stretch(k2().g)).st;
  for (int k : {1, 2}) {
    CoveringLemmaReport rep = verify_covering_lemmas(gt, k, 30, 128);
    CAPTURE(k);
    CHECK(rep.max_ratio <= 1.0);
    CHECK(rep.bound_a == 8);
    CHECK(rep.bound_b == 96);
    CHECK(!rep.rows.empty());
  }
}
