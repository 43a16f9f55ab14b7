#include "oslash/doubling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

namespace osl {

namespace {

const Rat kNudge(1'000'000'001, 1'000'000'000);

using Mask = std::vector<std::uint64_t>;

int popcount(const Mask& m) {
  int c = 0;
  for (auto w : m) c += __builtin_popcountll(w);
  return c;
}

bool subset_of(const Mask& a, const Mask& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

struct CoverProblem {
  int universe = 0;                 // |B(x, r)| after remapping to 0..u-1
  std::vector<Mask> sets;           // maximal distinct candidate half-balls
  std::vector<std::vector<int>> covering_sets;  // per element, sets containing it
};

int greedy_cover(const CoverProblem& pr, Mask uncovered, int count) {
  int words = (int)uncovered.size();
  while (true) {
    bool empty = true;
    for (auto w : uncovered)
      if (w) { empty = false; break; }
    if (empty) return count;
    int best = -1, best_gain = 0;
    for (int i = 0; i < (int)pr.sets.size(); ++i) {
      int gain = 0;
      for (int w = 0; w < words; ++w) gain += __builtin_popcountll(pr.sets[i][w] & uncovered[w]);
      if (gain > best_gain) { best_gain = gain; best = i; }
    }
    for (int w = 0; w < words; ++w) uncovered[w] &= ~pr.sets[best][w];
    ++count;
  }
}

struct BranchState {
  const CoverProblem* pr;
  std::int64_t nodes_left;
  int best;        // best complete cover found
  int max_set;     // largest set size, for the relaxation bound
  bool exhausted = false;

  void dfs(Mask uncovered, int used) {
    int unc = popcount(uncovered);
    if (unc == 0) { best = std::min(best, used); return; }
    if (--nodes_left < 0) { exhausted = true; return; }
    int bound = used + (unc + max_set - 1) / max_set;
    if (bound >= best) return;
    // branch on the first uncovered element
    int elem = -1;
    for (int w = 0; w < (int)uncovered.size() && elem < 0; ++w)
      if (uncovered[w]) elem = w * 64 + __builtin_ctzll(uncovered[w]);
    // try covering sets, largest remaining gain first
    std::vector<std::pair<int, int>> order;
    for (int si : pr->covering_sets[elem]) {
      int gain = 0;
      for (std::size_t w = 0; w < uncovered.size(); ++w)
        gain += __builtin_popcountll(pr->sets[si][w] & uncovered[w]);
      order.push_back({-gain, si});
    }
    std::sort(order.begin(), order.end());
    for (auto [neg, si] : order) {
      Mask next = uncovered;
      for (std::size_t w = 0; w < next.size(); ++w) next[w] &= ~pr->sets[si][w];
      dfs(std::move(next), used + 1);
      if (exhausted) return;
    }
  }
};

}  // namespace

std::vector<Rat> critical_radii(const DistanceMatrix& d) {
  std::set<Rat> vals;
  for (int i = 0; i < d.n(); ++i)
    for (int j = i + 1; j < d.n(); ++j) vals.insert(d.at(i, j));
  std::set<Rat> radii;
  for (const Rat& v : vals) {
    radii.insert(v * kNudge);
    radii.insert(Rat(2) * v * kNudge);
  }
  return {radii.begin(), radii.end()};
}

CoverBounds covering_number(const DistanceMatrix& d, int x, const Rat& r,
                            int exact_limit, std::int64_t node_budget) {
  const int n = d.n();
  const Rat half = r / Rat(2);

  std::vector<int> ball;
  std::vector<int> pos(n, -1);
  for (int u = 0; u < n; ++u)
    if (d.at(x, u) < r) {
      pos[u] = (int)ball.size();
      ball.push_back(u);
    }
  const int u_count = (int)ball.size();
  if (u_count <= 1) return {1, 1};

  const int words = (u_count + 63) / 64;
  std::vector<Mask> raw;
  raw.reserve(n);
  for (int y = 0; y < n; ++y) {
    Mask m(words, 0);
    bool any = false;
    for (int u : ball)
      if (d.at(y, u) < half) {
        m[pos[u] / 64] |= 1ull << (pos[u] % 64);
        any = true;
      }
    if (any) raw.push_back(std::move(m));
  }
  // dedupe, then keep only maximal sets
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  CoverProblem pr;
  pr.universe = u_count;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    bool dominated = false;  // raw is duplicate-free, so subset => strictly smaller
    for (std::size_t j = 0; j < raw.size() && !dominated; ++j)
      if (i != j && subset_of(raw[i], raw[j])) dominated = true;
    if (!dominated) pr.sets.push_back(raw[i]);
  }

  Mask full(words, 0);
  for (int i = 0; i < u_count; ++i) full[i / 64] |= 1ull << (i % 64);

  int max_set = 0;
  for (const Mask& m : pr.sets) max_set = std::max(max_set, popcount(m));
  int g = greedy_cover(pr, full, 0);
  double harmonic = 0;
  for (int i = 1; i <= max_set; ++i) harmonic += 1.0 / i;
  int lb = std::max((u_count + max_set - 1) / max_set,
                    (int)std::ceil((double)g / harmonic - 1e-12));
  lb = std::max(lb, 1);
  if (lb > g) lb = g;

  if (u_count > exact_limit) return {lb, g};

  pr.covering_sets.resize(u_count);
  for (int si = 0; si < (int)pr.sets.size(); ++si)
    for (int e = 0; e < u_count; ++e)
      if (pr.sets[si][e / 64] >> (e % 64) & 1) pr.covering_sets[e].push_back(si);

  BranchState st{&pr, node_budget, g, max_set};
  st.dfs(full, 0);
  if (st.exhausted) return {lb, st.best};
  return {st.best, st.best};
}

DoublingReport doubling_constant(const DistanceMatrix& d, int exact_limit) {
  DoublingReport rep;
  rep.n = d.n();
  rep.exact_limit = exact_limit;
  std::vector<Rat> radii = critical_radii(d);
  for (int x = 0; x < d.n(); ++x)
    for (const Rat& r : radii) {
      CoverBounds cb = covering_number(d, x, r, exact_limit);
      rep.rows.push_back({x, r, cb.lo, cb.hi});
      if (cb.lo > rep.lambda_lo) {
        rep.lambda_lo = cb.lo;
        rep.witness_center = x;
        rep.witness_radius = r;
      }
      rep.lambda_hi = std::max(rep.lambda_hi, cb.hi);
    }
  return rep;
}

void write_doubling_csv(std::ostream& out, const DoublingReport& rep) {
  out << "center,radius,cover_lo,cover_hi\n";
  for (const DoublingRow& row : rep.rows)
    out << row.center << "," << row.radius.str() << "," << row.lo << "," << row.hi << "\n";
  out << "# n=" << rep.n << " exact_limit=" << rep.exact_limit
      << " lambda_lo=" << rep.lambda_lo << " lambda_hi=" << rep.lambda_hi
      << " witness_center=" << rep.witness_center
      << " witness_radius=" << rep.witness_radius.str() << "\n";
}

CoveringLemmaReport verify_covering_lemmas(const STGraph& gtilde, int k,
                                           int exact_limit, int max_rows_per_regime) {
  Product top = power_top(gtilde, k);
  const int n1 = gtilde.g.n();
  const std::int64_t e1 = (std::int64_t)gtilde.g.edges().size();
  DistanceMatrix d = apsp(top.st.g);
  const Rat tri_third = tri(top.st) / Rat(3);
  const int n = d.n();

  CoveringLemmaReport rep;
  rep.k = k;
  rep.bound_a = n1;
  rep.bound_b = e1 * n1;

  std::vector<Rat> radii = critical_radii(d);

  // Regime A: big balls.  The depth-1 copy's vertices (ids 0..n1-1 in the
  // power_top layout) at radius r/2 must cover any B(x, r) with r > tri/3;
  // take the cheaper of that constructive cover and the generic bounds.
  {
    std::vector<std::pair<int, Rat>> cases;
    for (const Rat& r : radii)
      if (tri_third < r)
        for (int x = 0; x < n; ++x) cases.push_back({x, r});
    std::size_t stride = std::max<std::size_t>(1, cases.size() / max_rows_per_regime);
    for (std::size_t i = 0; i < cases.size(); i += stride) {
      auto [x, r] = cases[i];
      Rat half = r / Rat(2);
      int used = 0;
      bool covered_all = true;
      // every point of B(x,r) needs a host vertex within r/2
      std::vector<char> host_used(n1, 0);
      for (int u = 0; u < n && covered_all; ++u) {
        if (!(d.at(x, u) < r)) continue;
        bool found = false;
        for (int v = 0; v < n1; ++v)
          if (d.at(v, u) < half) {
            if (!host_used[v]) { host_used[v] = 1; ++used; }
            found = true;
            break;
          }
        if (!found) covered_all = false;
      }
      int hi;
      if (covered_all) {
        hi = std::max(used, 1);
      } else {
        hi = covering_number(d, x, r, exact_limit).hi;
      }
      CoveringLemmaRow row{'A', x, r, hi, rep.bound_a, (double)hi / (double)rep.bound_a};
      rep.max_ratio = std::max(rep.max_ratio, row.ratio);
      rep.rows.push_back(row);
    }
  }

  // Regime B: balls containing the s endpoint.
  {
    std::vector<std::pair<int, Rat>> cases;
    for (const Rat& r : radii)
      for (int x = 0; x < n; ++x)
        if (d.at(x, top.st.s) < r) cases.push_back({x, r});
    std::size_t stride = std::max<std::size_t>(1, cases.size() / max_rows_per_regime);
    for (std::size_t i = 0; i < cases.size(); i += stride) {
      auto [x, r] = cases[i];
      int hi = covering_number(d, x, r, exact_limit).hi;
      CoveringLemmaRow row{'B', x, r, hi, rep.bound_b, (double)hi / (double)rep.bound_b};
      rep.max_ratio = std::max(rep.max_ratio, row.ratio);
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace osl
