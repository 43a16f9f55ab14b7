#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "oslash/graph.hpp"

namespace osl {

enum class EdgeClass { vertical, horizontal };

// A stretched graph and its bookkeeping.  Layers are numbered 0 (s-side
// endpoints), 1..D+1 (copies of the base), D+2 (t-side endpoints).  Vertical
// edges are the within-layer copies of base edges; every other edge
// (rails, cross edges, endpoint edges, tails) is horizontal.
struct LayeredGraph {
  STGraph st;
  int m = 0;  // base vertex count
  int D = 0;  // base diameter
  bool has_tails = false;
  std::vector<int> layer;            // per vertex
  std::vector<int> base_vertex;      // per vertex; -1 for endpoint vertices
  std::vector<EdgeClass> edge_class; // aligned with st.g.edges()

  int layer_vertex(int base_v, int lay) const;  // id of copy of base_v in layer 1..D+1
  std::vector<int> layer_members(int lay) const;
  std::vector<int> vertical_edges_of_layer(int lay) const;  // edge indices
};

// Builds the stretched graph of a connected unit-length base G with diameter
// D: layers G^(1)..G^(D+1) joined by rails (v^(i), v^(i+1)) and cross edges
// in both directions ((u^(i), v^(i+1)) and (v^(i), u^(i+1)) for every base
// edge uv), plus endpoints s, t tied to the first/last layer by edges of
// length D.  d(s, t) == 3D.  Within-layer distances equal base distances;
// this is asserted exhaustively when the result has at most
// isometry_check_limit vertices (pass a larger limit to force the check).
LayeredGraph stretch(const MetricGraph& base, int isometry_check_limit = 2000);

// Attaches pendant edges of length 3D at s and t.  The old endpoints become
// interior (the new vertices take over as s and t); d(s, t) == 9D and every
// first-layer vertex sits at distance exactly 4D from the new s.
LayeredGraph add_tails(const LayeredGraph& lg);

// Sidecar bookkeeping file: vertex lines "v layer base_vertex" followed by
// edge lines "u v vertical|horizontal".
void write_layers(std::ostream& out, const LayeredGraph& lg);
void write_layers_file(const std::string& path, const LayeredGraph& lg);
// Re-attaches bookkeeping read from `in` to a graph parsed separately.
LayeredGraph read_layers(std::istream& in, STGraph st);
LayeredGraph read_layers_file(const std::string& path, STGraph st);

}  // namespace osl
