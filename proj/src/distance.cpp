#include "oslash/distance.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace osl {

void DistanceMatrix::check() const {
  for (int i = 0; i < n_; ++i) {
    if (at(i, i) != Rat(0)) throw std::logic_error("DistanceMatrix: nonzero diagonal");
    for (int j = i + 1; j < n_; ++j) {
      if (at(i, j) != at(j, i)) throw std::logic_error("DistanceMatrix: not symmetric");
      if (!(Rat(0) < at(i, j))) throw std::logic_error("DistanceMatrix: non-positive distance");
    }
  }
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (at(i, j) > at(i, k) + at(k, j))
          throw std::logic_error("DistanceMatrix: triangle inequality fails");
}

Eigen::MatrixXd DistanceMatrix::to_double() const {
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = at(i, j).to_double();
  return m;
}

Rat DistanceMatrix::max() const {
  Rat m(0);
  for (const Rat& x : d_) m = osl::max(m, x);
  return m;
}

std::vector<Rat> sssp(const MetricGraph& g, int src) {
  const int n = g.n();
  std::vector<Rat> dist(n, Rat(0));
  std::vector<char> done(n, 0), reached(n, 0);
  using Item = std::pair<Rat, int>;
  auto cmp = [](const Item& a, const Item& b) { return b.first < a.first; };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
  pq.push({Rat(0), src});
  reached[src] = 1;
  while (!pq.empty()) {
    auto [d, x] = pq.top();
    pq.pop();
    if (done[x]) continue;
    done[x] = 1;
    dist[x] = d;
    for (auto [y, ei] : g.adj()[x]) {
      if (done[y]) continue;
      Rat nd = d + g.edges()[ei].len;
      if (!reached[y] || nd < dist[y]) {
        reached[y] = 1;
        dist[y] = nd;
        pq.push({nd, y});
      }
    }
  }
  for (int v = 0; v < n; ++v)
    if (!done[v])
      throw std::runtime_error("infinite distance: no path between vertices " +
                               std::to_string(src) + " and " + std::to_string(v));
  return dist;
}

DistanceMatrix apsp(const MetricGraph& g) {
  DistanceMatrix d(g.n());
  for (int s = 0; s < g.n(); ++s) {
    std::vector<Rat> row = sssp(g, s);
    for (int v = 0; v < g.n(); ++v) d.at(s, v) = row[v];
  }
  return d;
}

Rat st_length(const STGraph& g) { return sssp(g.g, g.s)[g.t]; }

Rat tri(const STGraph& g) {
  std::vector<Rat> from_s = sssp(g.g, g.s);
  std::vector<Rat> from_t = sssp(g.g, g.t);
  Rat best(0);
  for (int v = 0; v < g.g.n(); ++v) best = max(best, from_s[v] + from_t[v]);
  return best;
}

namespace {

// Backtracking search over scaled-isometric bijections.  scale.num == 0
// encodes "not yet determined"; genuine metrics have positive off-diagonal
// distances, so a determined scale is always positive.
bool search_bijection(const DistanceMatrix& dh, const std::vector<int>& subset,
                      const DistanceMatrix& dg, std::vector<int>& img,
                      std::vector<char>& used, int next, Rat& scale) {
  const int m = dg.n();
  if (next == m) return true;
  for (int pos = 0; pos < m; ++pos) {
    if (used[pos]) continue;
    int cand = subset[pos];
    Rat saved = scale;
    bool ok = true;
    for (int j = 0; j < next; ++j) {
      Rat a = dg.at(next, j), b = dh.at(cand, img[j]);
      if (scale.num == 0) scale = b / a;
      else if (b != scale * a) { ok = false; break; }
    }
    if (ok) {
      img[next] = cand;
      used[pos] = 1;
      if (search_bijection(dh, subset, dg, img, used, next + 1, scale)) return true;
      used[pos] = 0;
    }
    scale = saved;
  }
  return false;
}

}  // namespace

CopyMatch is_copy(const DistanceMatrix& dh, const std::vector<int>& subset,
                  const DistanceMatrix& dg, const std::optional<std::vector<int>>& given) {
  const int m = dg.n();
  if ((int)subset.size() != m) return {false, Rat(0)};
  if (given) {
    const std::vector<int>& f = *given;
    if ((int)f.size() != m) return {false, Rat(0)};
    Rat scale(0);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        Rat a = dg.at(i, j), b = dh.at(f[i], f[j]);
        if (a.num == 0 || b.num == 0) {
          if ((a.num == 0) != (b.num == 0)) return {false, Rat(0)};
          continue;
        }
        if (scale.num == 0) scale = b / a;
        else if (b != scale * a) return {false, Rat(0)};
      }
    if (scale.num == 0) scale = Rat(1);  // degenerate: 1-point copy
    return {true, scale};
  }
  if (m > 10)
    throw std::invalid_argument("is_copy: exhaustive search capped at 10 vertices; supply a bijection");
  std::vector<int> img(m, -1);
  std::vector<char> used(m, 0);
  Rat scale(0);
  if (search_bijection(dh, subset, dg, img, used, 0, scale))
    return {true, scale.num == 0 ? Rat(1) : scale};
  return {false, Rat(0)};
}

}  // namespace osl
