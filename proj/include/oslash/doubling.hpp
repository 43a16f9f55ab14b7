#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "oslash/compose.hpp"
#include "oslash/distance.hpp"

namespace osl {

// All radii at which any open ball B(x, r) or half-ball B(y, r/2) can change:
// every pairwise distance and twice every pairwise distance, each nudged up
// by the exact factor (10^9 + 1)/10^9 so that ties resolve consistently and
// rescaling the metric rescales the radii.  Sorted, duplicates removed.
std::vector<Rat> critical_radii(const DistanceMatrix& d);

struct CoverBounds {
  int lo = 0;
  int hi = 0;
  bool exact() const { return lo == hi; }
};

// Minimum number of open balls of radius r/2 (centers anywhere in the space)
// needed to cover the open ball B(x, r).  Exact (via branch-and-bound set
// cover) when |B(x, r)| <= exact_limit and the node budget suffices;
// otherwise returns a certified lower bound and the greedy upper bound.
CoverBounds covering_number(const DistanceMatrix& d, int x, const Rat& r,
                            int exact_limit = 30, std::int64_t node_budget = 4'000'000);

struct DoublingRow {
  int center = 0;
  Rat radius{0};
  int lo = 0, hi = 0;
};

struct DoublingReport {
  int n = 0;
  int exact_limit = 0;
  int lambda_lo = 0, lambda_hi = 0;
  int witness_center = 0;  // attains lambda_lo
  Rat witness_radius{0};
  std::vector<DoublingRow> rows;  // one per (center, critical radius)
};

// Doubling constant: max over centers and critical radii of covering_number.
// lambda_lo == lambda_hi means the value is exact.
DoublingReport doubling_constant(const DistanceMatrix& d, int exact_limit = 30);

void write_doubling_csv(std::ostream& out, const DoublingReport& rep);

// Structural covering bounds on the k-th power of a tailed stretched graph,
// checked on concrete balls.  Regime A: r > tri/3, cover size vs the order
// of the depth-1 copy (its vertices at half radius cover everything).
// Regime B: balls containing an endpoint, cover size vs |E| * |V| of the
// depth-1 graph.  All ratios must be <= 1.
struct CoveringLemmaRow {
  char regime = 'A';
  int center = 0;
  Rat radius{0};
  int cover_hi = 0;
  std::int64_t bound = 0;
  double ratio = 0;
};

struct CoveringLemmaReport {
  int k = 0;
  std::int64_t bound_a = 0, bound_b = 0;
  double max_ratio = 0;
  std::vector<CoveringLemmaRow> rows;
};

CoveringLemmaReport verify_covering_lemmas(const STGraph& gtilde, int k,
                                           int exact_limit = 30,
                                           int max_rows_per_regime = 512);

}  // namespace osl
