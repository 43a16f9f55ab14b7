#pragma once

#include <cstdint>
#include <vector>

#include "oslash/distance.hpp"
#include "oslash/graph.hpp"

namespace osl {

// Where a product vertex came from: either a host vertex, or the copy of a
// guest vertex sitting inside the substitution of one host edge.
struct VertexOrigin {
  int host = -1;        // >= 0: id in H
  int host_edge = -1;   // else: index into H.edges()
  int guest_vertex = -1;
};

// Every product edge is a scaled copy of one guest edge inside one host edge.
struct EdgeOrigin {
  int host_edge = -1;
  int guest_edge = -1;
};

struct Product {
  STGraph st;
  std::vector<VertexOrigin> vertex_origin;  // indexed by product vertex id
  std::vector<EdgeOrigin> edge_origin;      // aligned with st.g.edges()
};

// Edge substitution: replace every edge (a, b) of H by a copy of G scaled so
// the copy's s-t distance equals len(a, b), attaching s at the tail a and t
// at the head b (swapped when reverse_guest is set).  Vertex ids: V(H) keeps
// its ids; the copy of guest vertex w inside host edge e gets id
//   n_H + e * (n_G - 2) + rank of w among V(G) \ {s, t}.
// The result's endpoints are s(H), t(H); s-t length is preserved exactly.
Product oslash(const STGraph& h, const STGraph& g, bool reverse_guest = false);

// k-fold power: X_0 = unit edge, X_i = X_{i-1} oslash g.  st_length == 1 for
// every k.  Vertex and edge counts are cross-checked against the recurrences
// V_i = V_{i-1} + E_{i-1} (n_G - 2), E_i = E_{i-1} |E(G)|; max_edges guards
// against runaway sizes (throws ResourceLimit).
STGraph power(const STGraph& g, int k, std::int64_t max_edges = 2'000'000);

// Same metric space as power(g, k) but built as g oslash (g oslash (...)),
// so the host of the outermost product is the depth-1 copy of g itself:
// vertices 0..n_G-1 are the top copy, and vertex_origin groups everything
// else by the top-copy edge whose substitution contains it.  Requires k >= 1.
Product power_top(const STGraph& g, int k, std::int64_t max_edges = 2'000'000);

// Number of vertices/edges power(g, k) would have.
std::pair<std::int64_t, std::int64_t> power_size(const STGraph& g, int k);

STGraph unit_edge();

}  // namespace osl
