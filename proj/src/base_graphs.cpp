#include "oslash/base_graphs.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <set>

#include "oslash/errors.hpp"

namespace osl {

BaseGraph k2() {
  BaseGraph b;
  b.g = MetricGraph(2, {{0, 1, Rat(1)}});
  b.action.perms = {{0, 1}, {1, 0}};
  return b;
}

BaseGraph cayley_cycle(int m, std::vector<int> gens) {
  if (m < 3) throw std::invalid_argument("cayley_cycle: need m >= 3");
  std::set<int> conn;
  for (int g : gens) {
    int r = ((g % m) + m) % m;
    if (r == 0) continue;
    conn.insert(std::min(r, m - r));
  }
  if (conn.empty()) throw std::invalid_argument("cayley_cycle: empty connection set");
  int g_all = m;
  for (int g : conn) g_all = std::gcd(g_all, g);
  if (g_all > 1)
    throw std::invalid_argument("cayley_cycle: disconnected (gcd of generators and m is " +
                                std::to_string(g_all) + ")");
  std::vector<Edge> edges;  // duplicates collapse in the MetricGraph constructor
  for (int v = 0; v < m; ++v)
    for (int g : conn) {
      int w = (v + g) % m;
      edges.push_back({std::min(v, w), std::max(v, w), Rat(1)});
    }
  BaseGraph b;
  b.g = MetricGraph(m, std::move(edges));
  b.action.perms.resize(m);
  for (int j = 0; j < m; ++j) {
    b.action.perms[j].resize(m);
    for (int v = 0; v < m; ++v) b.action.perms[j][v] = (v + j) % m;
  }
  return b;
}

BaseGraph hypercube(int r) {
  if (r < 1 || r > 20) throw std::invalid_argument("hypercube: need 1 <= r <= 20");
  const int n = 1 << r;
  std::vector<Edge> edges;
  for (int v = 0; v < n; ++v)
    for (int b = 0; b < r; ++b) {
      int w = v ^ (1 << b);
      if (v < w) edges.push_back({v, w, Rat(1)});
    }
  BaseGraph bg;
  bg.g = MetricGraph(n, std::move(edges));
  bg.action.perms.resize(n);
  for (int a = 0; a < n; ++a) {
    bg.action.perms[a].resize(n);
    for (int v = 0; v < n; ++v) bg.action.perms[a][v] = v ^ a;
  }
  return bg;
}

namespace {

bool is_permutation(const std::vector<int>& p, int n) {
  if ((int)p.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (int x : p) {
    if (x < 0 || x >= n || seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

bool is_automorphism(const std::vector<int>& p, const MetricGraph& g) {
  for (const Edge& e : g.edges()) {
    int ei = g.find_edge(p[e.u], p[e.v]);
    if (ei < 0 || g.edges()[ei].len != e.len) return false;
  }
  return true;
}

}  // namespace

bool action_check(const GroupAction& a, const MetricGraph& g, bool require_transitive) {
  const int n = g.n();
  if (a.perms.empty()) return false;
  for (const auto& p : a.perms)
    if (!is_permutation(p, n) || !is_automorphism(p, g)) return false;

  std::set<std::vector<int>> members(a.perms.begin(), a.perms.end());
  if (members.size() != a.perms.size()) return false;  // duplicates
  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 0);
  if (!members.count(id)) return false;
  std::vector<int> comp(n);
  for (const auto& p : a.perms)
    for (const auto& q : a.perms) {
      for (int v = 0; v < n; ++v) comp[v] = p[q[v]];
      if (!members.count(comp)) return false;
    }

  if (require_transitive) {
    std::set<int> orbit;
    for (const auto& p : a.perms) orbit.insert(p[0]);
    if ((int)orbit.size() != n) return false;
  }
  return true;
}

GroupAction lift_action(const GroupAction& a, const LayeredGraph& lg) {
  const int n = lg.st.g.n();
  GroupAction out;
  out.perms.reserve(a.perms.size());
  for (const auto& p : a.perms) {
    std::vector<int> q(n);
    for (int v = 0; v < n; ++v) {
      int lay = lg.layer[v];
      int bv = lg.base_vertex[v];
      q[v] = (bv < 0) ? v : lg.layer_vertex(p[bv], lay);
    }
    out.perms.push_back(std::move(q));
  }
  if (!action_check(out, lg.st.g, /*require_transitive=*/false))
    throw InvariantFailure("lift_action: lifted permutations are not automorphisms");
  return out;
}

SpectralReport mu2(const MetricGraph& g) {
  if (!g.is_regular())
    throw std::invalid_argument("mu2: graph must be regular with unit lengths");
  const int n = g.n();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    L(e.u, e.u) += 1;
    L(e.v, e.v) += 1;
    L(e.u, e.v) -= 1;
    L(e.v, e.u) -= 1;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  if (es.info() != Eigen::Success) throw std::runtime_error("mu2: eigensolver failed");
  SpectralReport r;
  r.n = n;
  r.degree = (int)g.adj()[0].size();
  double raw = n >= 2 ? es.eigenvalues()(1) : 0.0;
  r.mu2 = std::max(raw, 0.0);
  if (n >= 2) {
    Eigen::VectorXd x = es.eigenvectors().col(1);
    r.residual = (L * x - raw * x).norm() / x.norm();
  }
  return r;
}

}  // namespace osl
