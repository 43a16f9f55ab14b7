#include "oslash/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace osl {

MetricGraph::MetricGraph(int n, std::vector<Edge> edges, bool canonical_orientation)
    : n_(n) {
  if (n < 1) throw std::invalid_argument("MetricGraph: need at least one vertex");
  std::map<std::pair<int, int>, Edge> best;
  for (Edge e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw std::invalid_argument("MetricGraph: edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("MetricGraph: self-loop");
    if (e.len.num <= 0) throw std::invalid_argument("MetricGraph: non-positive edge length");
    if (canonical_orientation && e.u > e.v) std::swap(e.u, e.v);
    auto key = std::minmax(e.u, e.v);
    auto it = best.find(key);
    if (it == best.end() || e.len < it->second.len) best[key] = e;
  }
  edges_.reserve(best.size());
  for (auto& [k, e] : best) edges_.push_back(e);
  adj_.assign(n_, {});
  for (int i = 0; i < (int)edges_.size(); ++i) {
    adj_[edges_[i].u].push_back({edges_[i].v, i});
    adj_[edges_[i].v].push_back({edges_[i].u, i});
  }
}

bool MetricGraph::connected() const {
  if (n_ == 0) return true;
  std::vector<char> seen(n_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int cnt = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (auto [y, ei] : adj_[x])
      if (!seen[y]) { seen[y] = 1; ++cnt; stack.push_back(y); }
  }
  return cnt == n_;
}

int MetricGraph::max_degree() const {
  int d = 0;
  for (auto& a : adj_) d = std::max(d, (int)a.size());
  return d;
}

bool MetricGraph::is_regular() const {
  if (n_ == 0) return false;
  std::size_t d = adj_[0].size();
  for (auto& a : adj_)
    if (a.size() != d) return false;
  for (auto& e : edges_)
    if (e.len != Rat(1)) return false;
  return true;
}

int MetricGraph::find_edge(int u, int v) const {
  for (auto [y, ei] : adj_[u])
    if (y == v) return ei;
  return -1;
}

STGraph::STGraph(MetricGraph graph, int s_, int t_) : g(std::move(graph)), s(s_), t(t_) {
  if (s < 0 || s >= g.n() || t < 0 || t >= g.n())
    throw std::invalid_argument("STGraph: endpoint out of range");
  if (s == t) throw std::invalid_argument("STGraph: s == t");
  if (!g.connected()) throw std::invalid_argument("STGraph: graph is disconnected");
}

namespace {

// strips comments, returns false at eof
bool next_content_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void parse_fail(int lineno, const std::string& what) {
  throw std::runtime_error("graph parse error at line " + std::to_string(lineno) + ": " + what);
}

struct ParsedGraph {
  MetricGraph g;
  int s, t;
};

ParsedGraph parse_graph(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno)) parse_fail(lineno, "missing header");
  std::istringstream hs(line);
  long long n, s, t;
  if (!(hs >> n >> s >> t)) parse_fail(lineno, "header must be 'n s t'");
  if (n < 1 || n > 10'000'000) parse_fail(lineno, "vertex count out of range");
  std::vector<Edge> edges;
  while (next_content_line(in, line, lineno)) {
    std::istringstream es(line);
    long long u, v;
    std::string lenstr;
    if (!(es >> u >> v >> lenstr)) parse_fail(lineno, "edge line must be 'u v len'");
    if (u < 0 || u >= n || v < 0 || v >= n) parse_fail(lineno, "edge endpoint out of range");
    if (u == v) parse_fail(lineno, "self-loop");
    Rat len;
    try {
      len = Rat::parse(lenstr);
    } catch (const std::exception& e) {
      parse_fail(lineno, std::string("bad length: ") + e.what());
    }
    if (len.num <= 0) parse_fail(lineno, "edge length must be positive");
    edges.push_back({(int)u, (int)v, len});
  }
  return {MetricGraph((int)n, std::move(edges)), (int)s, (int)t};
}

}  // namespace

MetricGraph read_graph(std::istream& in) { return parse_graph(in).g; }

MetricGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_graph(in);
}

STGraph read_st_graph(std::istream& in) {
  ParsedGraph p = parse_graph(in);
  if (p.s == p.t)
    throw std::runtime_error("graph has no distinguished endpoints (header s == t)");
  return STGraph(std::move(p.g), p.s, p.t);
}

STGraph read_st_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_st_graph(in);
}

void write_graph(std::ostream& out, const MetricGraph& g, int s, int t) {
  out << g.n() << " " << s << " " << t << "\n";
  for (const Edge& e : g.edges())
    out << e.u << " " << e.v << " " << e.len.str() << "\n";
}

void write_graph_file(const std::string& path, const MetricGraph& g, int s, int t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_graph(out, g, s, t);
}

}  // namespace osl
