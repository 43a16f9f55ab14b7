#include "oslash/layered.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "oslash/distance.hpp"
#include "oslash/errors.hpp"

namespace osl {

int LayeredGraph::layer_vertex(int base_v, int lay) const {
  if (lay < 1 || lay > D + 1 || base_v < 0 || base_v >= m)
    throw std::out_of_range("layer_vertex");
  return 1 + (lay - 1) * m + base_v;
}

std::vector<int> LayeredGraph::layer_members(int lay) const {
  std::vector<int> out;
  for (int v = 0; v < st.g.n(); ++v)
    if (layer[v] == lay) out.push_back(v);
  return out;
}

std::vector<int> LayeredGraph::vertical_edges_of_layer(int lay) const {
  std::vector<int> out;
  const auto& es = st.g.edges();
  for (int i = 0; i < (int)es.size(); ++i)
    if (edge_class[i] == EdgeClass::vertical && layer[es[i].u] == lay) out.push_back(i);
  return out;
}

LayeredGraph stretch(const MetricGraph& base, int isometry_check_limit) {
  const int m = base.n();
  if (m < 2) throw std::invalid_argument("stretch: base needs at least 2 vertices");
  if (!base.connected()) throw std::invalid_argument("stretch: base is disconnected");
  for (const Edge& e : base.edges())
    if (e.len != Rat(1)) throw std::invalid_argument("stretch: base must have unit edge lengths");

  DistanceMatrix bd = apsp(base);
  Rat diam = bd.max();
  const int D = (int)diam.num;  // unit lengths => integer distances

  // ids: s = 0; copy of base vertex v in layer i is 1 + (i-1) m + v; t last
  LayeredGraph lg;
  lg.m = m;
  lg.D = D;
  const int n = 2 + m * (D + 1);
  const int t_id = n - 1;
  auto vid = [&](int v, int i) { return 1 + (i - 1) * m + v; };

  std::vector<Edge> edges;
  std::map<std::pair<int, int>, EdgeClass> classes;
  auto push = [&](int u, int v, Rat len, EdgeClass c) {
    edges.push_back({u, v, len});
    classes[std::minmax(u, v)] = c;
  };
  for (int v = 0; v < m; ++v) {
    push(0, vid(v, 1), Rat(D), EdgeClass::horizontal);
    push(vid(v, D + 1), t_id, Rat(D), EdgeClass::horizontal);
  }
  for (int i = 1; i <= D + 1; ++i)
    for (const Edge& e : base.edges())
      push(vid(e.u, i), vid(e.v, i), Rat(1), EdgeClass::vertical);
  for (int i = 1; i <= D; ++i) {
    for (int v = 0; v < m; ++v) push(vid(v, i), vid(v, i + 1), Rat(1), EdgeClass::horizontal);
    for (const Edge& e : base.edges()) {
      push(vid(e.u, i), vid(e.v, i + 1), Rat(1), EdgeClass::horizontal);
      push(vid(e.v, i), vid(e.u, i + 1), Rat(1), EdgeClass::horizontal);
    }
  }

  lg.st = STGraph(MetricGraph(n, std::move(edges)), 0, t_id);
  lg.layer.assign(n, 0);
  lg.base_vertex.assign(n, -1);
  lg.layer[t_id] = D + 2;
  for (int i = 1; i <= D + 1; ++i)
    for (int v = 0; v < m; ++v) {
      lg.layer[vid(v, i)] = i;
      lg.base_vertex[vid(v, i)] = v;
    }
  const auto& es = lg.st.g.edges();
  lg.edge_class.resize(es.size());
  for (int i = 0; i < (int)es.size(); ++i)
    lg.edge_class[i] = classes.at(std::minmax(es[i].u, es[i].v));

  if (st_length(lg.st) != Rat(3) * Rat(D))
    throw InvariantFailure("stretch: d(s,t) != 3D");
  if (n <= isometry_check_limit) {
    DistanceMatrix sd = apsp(lg.st.g);
    for (int i = 1; i <= D + 1; ++i)
      for (int u = 0; u < m; ++u)
        for (int v = u + 1; v < m; ++v)
          if (sd.at(vid(u, i), vid(v, i)) != bd.at(u, v))
            throw InvariantFailure("stretch: layer " + std::to_string(i) +
                                   " is not an isometric copy of the base");
  }
  return lg;
}

LayeredGraph add_tails(const LayeredGraph& lg) {
  if (lg.has_tails) throw std::invalid_argument("add_tails: tails already attached");
  const int n = lg.st.g.n();
  const Rat tail = Rat(3) * Rat(lg.D);
  std::vector<Edge> edges = lg.st.g.edges();
  edges.push_back({n, lg.st.s, tail});      // new s
  edges.push_back({lg.st.t, n + 1, tail});  // new t

  LayeredGraph out;
  out.m = lg.m;
  out.D = lg.D;
  out.has_tails = true;
  out.st = STGraph(MetricGraph(n + 2, edges, /*canonical_orientation=*/false), n, n + 1);
  out.layer = lg.layer;
  out.layer.push_back(0);
  out.layer.push_back(lg.D + 2);
  out.base_vertex = lg.base_vertex;
  out.base_vertex.push_back(-1);
  out.base_vertex.push_back(-1);
  const auto& es = out.st.g.edges();
  out.edge_class.resize(es.size());
  for (int i = 0; i < (int)es.size(); ++i) {
    const Edge& e = es[i];
    if (e.u >= n || e.v >= n) out.edge_class[i] = EdgeClass::horizontal;
    else out.edge_class[i] = lg.edge_class[lg.st.g.find_edge(e.u, e.v)];
  }

  std::vector<Rat> from_s = sssp(out.st.g, out.st.s);
  if (from_s[out.st.t] != Rat(9) * Rat(lg.D))
    throw InvariantFailure("add_tails: d(s,t) != 9D");
  for (int v = 0; v < out.st.g.n(); ++v)
    if (out.layer[v] == 1 && from_s[v] != Rat(4) * Rat(lg.D))
      throw InvariantFailure("add_tails: first-layer vertex not at distance 4D from s");
  return out;
}

void write_layers(std::ostream& out, const LayeredGraph& lg) {
  for (int v = 0; v < lg.st.g.n(); ++v)
    out << v << " " << lg.layer[v] << " " << lg.base_vertex[v] << "\n";
  const auto& es = lg.st.g.edges();
  for (int i = 0; i < (int)es.size(); ++i)
    out << es[i].u << " " << es[i].v << " "
        << (lg.edge_class[i] == EdgeClass::vertical ? "vertical" : "horizontal") << "\n";
}

void write_layers_file(const std::string& path, const LayeredGraph& lg) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_layers(f, lg);
}

LayeredGraph read_layers(std::istream& in, STGraph st) {
  LayeredGraph lg;
  const int n = st.g.n();
  lg.layer.assign(n, -1);
  lg.base_vertex.assign(n, -1);
  lg.edge_class.assign(st.g.edges().size(), EdgeClass::horizontal);
  std::vector<char> edge_seen(st.g.edges().size(), 0);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ls(line);
    long long a, b;
    std::string third;
    if (!(ls >> a >> b >> third))
      throw std::runtime_error("layer file parse error at line " + std::to_string(lineno));
    bool numeric = !third.empty() &&
                   third.find_first_not_of("-0123456789") == std::string::npos;
    if (numeric) {
      if (a < 0 || a >= n)
        throw std::runtime_error("layer file: vertex out of range at line " + std::to_string(lineno));
      lg.layer[a] = (int)b;
      lg.base_vertex[a] = (int)std::stoll(third);
    } else {
      int ei = st.g.find_edge((int)a, (int)b);
      if (ei < 0)
        throw std::runtime_error("layer file: unknown edge at line " + std::to_string(lineno));
      if (third != "vertical" && third != "horizontal")
        throw std::runtime_error("layer file: bad edge class at line " + std::to_string(lineno));
      lg.edge_class[ei] = third == "vertical" ? EdgeClass::vertical : EdgeClass::horizontal;
      edge_seen[ei] = 1;
    }
  }
  for (int v = 0; v < n; ++v)
    if (lg.layer[v] < 0) throw std::runtime_error("layer file: missing vertex " + std::to_string(v));
  for (std::size_t i = 0; i < edge_seen.size(); ++i)
    if (!edge_seen[i]) throw std::runtime_error("layer file: missing edge class for edge " + std::to_string(i));
  int maxlayer = *std::max_element(lg.layer.begin(), lg.layer.end());
  lg.D = maxlayer - 2;
  lg.m = *std::max_element(lg.base_vertex.begin(), lg.base_vertex.end()) + 1;
  lg.has_tails = std::count(lg.layer.begin(), lg.layer.end(), 0) == 2;
  lg.st = std::move(st);
  return lg;
}

LayeredGraph read_layers_file(const std::string& path, STGraph st) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_layers(f, std::move(st));
}

}  // namespace osl
