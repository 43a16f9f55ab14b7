#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "oslash/rat.hpp"

namespace osl {

// Edges are stored with an explicit orientation (u = tail, v = head).  The
// metric ignores it, but edge substitution does not: fragments of a replaced
// edge attach the guest's s-side at the tail and t-side at the head.  Graphs
// built from raw input orient every edge from lower to higher vertex id;
// composed graphs inherit orientations, which keeps nested substitutions
// associative even for guests with asymmetric endpoints.
struct Edge {
  int u = 0;
  int v = 0;
  Rat len{1};
};

// Finite connected graph with positive rational edge lengths, vertices 0..n-1.
// Self-loops are rejected; parallel edges collapse to the shortest.
class MetricGraph {
 public:
  MetricGraph() = default;
  MetricGraph(int n, std::vector<Edge> edges, bool canonical_orientation = true);

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  // adjacency: for each vertex, (neighbor, edge index) pairs
  const std::vector<std::vector<std::pair<int, int>>>& adj() const { return adj_; }

  bool connected() const;
  int max_degree() const;
  bool is_regular() const;  // all degrees equal and all lengths 1

  // index of edge {u,v} ignoring orientation, or -1
  int find_edge(int u, int v) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
};

// Graph with distinguished endpoints s != t.
struct STGraph {
  MetricGraph g;
  int s = 0;
  int t = 1;

  STGraph() = default;
  STGraph(MetricGraph graph, int s_, int t_);
};

// Text format shared by all tools.  Line 1: "n s t"; then one line per edge:
// "u v len" with len a positive integer, decimal, or p/q rational.  Blank
// lines and lines starting with '#' are ignored.  A header with s == t means
// the graph carries no distinguished endpoints (read_st_graph rejects it).
MetricGraph read_graph(std::istream& in);
MetricGraph read_graph_file(const std::string& path);
STGraph read_st_graph(std::istream& in);
STGraph read_st_graph_file(const std::string& path);
void write_graph(std::ostream& out, const MetricGraph& g, int s = 0, int t = 0);
void write_graph_file(const std::string& path, const MetricGraph& g, int s = 0, int t = 0);

}  // namespace osl
