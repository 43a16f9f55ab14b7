#include "oslash/compose.hpp"

#include <algorithm>
#include <map>

#include "oslash/errors.hpp"

namespace osl {

STGraph unit_edge() {
  return STGraph(MetricGraph(2, {{0, 1, Rat(1)}}), 0, 1);
}

Product oslash(const STGraph& h, const STGraph& g, bool reverse_guest) {
  const int nh = h.g.n(), ng = g.g.n();
  const int gs = reverse_guest ? g.t : g.s;
  const int gt = reverse_guest ? g.s : g.t;
  const Rat dg = st_length(g);
  if (dg.num <= 0) throw InvariantFailure("oslash: degenerate guest, d(s,t) == 0");

  // inner guest vertices in increasing id order
  std::vector<int> inner;
  std::vector<int> inner_rank(ng, -1);
  for (int w = 0; w < ng; ++w)
    if (w != gs && w != gt) {
      inner_rank[w] = (int)inner.size();
      inner.push_back(w);
    }
  const int ni = (int)inner.size();

  const auto& hedges = h.g.edges();
  const auto& gedges = g.g.edges();
  if ((std::int64_t)nh + (std::int64_t)hedges.size() * ni > 100'000'000 ||
      (std::int64_t)hedges.size() * (std::int64_t)gedges.size() > 100'000'000)
    throw ResourceLimit("oslash: product too large");
  const int n_out = nh + (int)hedges.size() * ni;

  std::vector<Edge> out_edges;
  out_edges.reserve(hedges.size() * gedges.size());
  std::map<std::pair<int, int>, EdgeOrigin> origin_of_pair;

  for (int e = 0; e < (int)hedges.size(); ++e) {
    const Edge& he = hedges[e];
    const Rat scale = he.len / dg;
    const int base_id = nh + e * ni;
    auto phi = [&](int w) {
      if (w == gs) return he.u;
      if (w == gt) return he.v;
      return base_id + inner_rank[w];
    };
    for (int f = 0; f < (int)gedges.size(); ++f) {
      const Edge& ge = gedges[f];
      Edge ne{phi(ge.u), phi(ge.v), scale * ge.len};
      out_edges.push_back(ne);
      origin_of_pair[std::minmax(ne.u, ne.v)] = {e, f};
    }
  }

  const std::size_t raw_edge_count = out_edges.size();
  Product p;
  p.st = STGraph(MetricGraph(n_out, std::move(out_edges), /*canonical_orientation=*/false),
                 h.s, h.t);
  if (p.st.g.edges().size() != raw_edge_count)
    throw InvariantFailure("oslash: unexpected parallel edges in product");
  p.vertex_origin.resize(n_out);
  for (int v = 0; v < nh; ++v) p.vertex_origin[v].host = v;
  for (int e = 0; e < (int)hedges.size(); ++e)
    for (int r = 0; r < ni; ++r) {
      VertexOrigin& vo = p.vertex_origin[nh + e * ni + r];
      vo.host_edge = e;
      vo.guest_vertex = inner[r];
    }
  const auto& pedges = p.st.g.edges();
  p.edge_origin.resize(pedges.size());
  for (int i = 0; i < (int)pedges.size(); ++i)
    p.edge_origin[i] = origin_of_pair.at(std::minmax(pedges[i].u, pedges[i].v));

  if (sssp(p.st.g, p.st.s)[p.st.t] != st_length(h))
    throw InvariantFailure("oslash: s-t length not preserved");
  return p;
}

std::pair<std::int64_t, std::int64_t> power_size(const STGraph& g, int k) {
  std::int64_t v = 2, e = 1;
  const std::int64_t ng = g.g.n(), mg = (std::int64_t)g.g.edges().size();
  for (int i = 0; i < k; ++i) {
    if (e > (std::int64_t)4e18 / mg) throw ResourceLimit("power: size overflow");
    v = v + e * (ng - 2);
    e = e * mg;
  }
  return {v, e};
}

namespace {

void check_size(const STGraph& g, int k, std::int64_t max_edges) {
  auto [v, e] = power_size(g, k);
  if (e > max_edges || v > max_edges)
    throw ResourceLimit("power: level " + std::to_string(k) + " has " + std::to_string(v) +
                        " vertices / " + std::to_string(e) + " edges, over the limit of " +
                        std::to_string(max_edges));
}

}  // namespace

STGraph power(const STGraph& g, int k, std::int64_t max_edges) {
  if (k < 0) throw std::invalid_argument("power: k must be >= 0");
  check_size(g, k, max_edges);
  STGraph acc = unit_edge();
  std::int64_t v = 2, e = 1;
  for (int i = 1; i <= k; ++i) {
    acc = oslash(acc, g).st;
    v = v + e * (g.g.n() - 2);
    e = e * (std::int64_t)g.g.edges().size();
    if (acc.g.n() != v || (std::int64_t)acc.g.edges().size() != e)
      throw InvariantFailure("power: size recurrence mismatch at level " + std::to_string(i));
  }
  return acc;
}

Product power_top(const STGraph& g, int k, std::int64_t max_edges) {
  if (k < 1) throw std::invalid_argument("power_top: k must be >= 1");
  check_size(g, k, max_edges);
  STGraph inner = unit_edge();
  for (int i = 1; i < k; ++i) inner = oslash(inner, g).st;
  return oslash(g, inner);
}

}  // namespace osl
