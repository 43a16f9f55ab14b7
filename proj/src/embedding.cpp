#include "oslash/embedding.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "oslash/errors.hpp"

namespace osl {

double pnorm(const Eigen::VectorXd& v, double p) {
  if (p < 1) throw std::invalid_argument("pnorm: p must be >= 1");
  if (p == 2) return v.norm();
  if (p == 1) return v.lpNorm<1>();
  double s = 0;
  for (int i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), p);
  return std::pow(s, 1.0 / p);
}

double PointConfig::dist(int i, int j) const {
  return pnorm(pts.row(i) - pts.row(j), p);
}

void write_points(std::ostream& out, const PointConfig& f) {
  out << f.n() << ' ' << f.dim() << ' ';
  out.precision(17);
  out << f.p << '\n';
  for (int v = 0; v < f.n(); ++v) {
    for (int c = 0; c < f.dim(); ++c) out << (c ? " " : "") << f.pts(v, c);
    out << '\n';
  }
}

void write_points_file(const std::string& path, const PointConfig& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_points(out, f);
}

PointConfig read_points(std::istream& in) {
  int n = 0, dim = 0;
  double p = 0;
  if (!(in >> n >> dim >> p)) throw std::runtime_error("points: bad header");
  if (n < 0 || dim < 1 || p < 1)
    throw std::runtime_error("points: invalid header values");
  PointConfig f;
  f.p = p;
  f.pts.resize(n, dim);
  for (int v = 0; v < n; ++v)
    for (int c = 0; c < dim; ++c)
      if (!(in >> f.pts(v, c)) || !std::isfinite(f.pts(v, c)))
        throw std::runtime_error("points: bad coordinate at vertex " +
                                 std::to_string(v));
  return f;
}

PointConfig read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return read_points(in);
}

EmbeddingReport distortion(const PointConfig& f, const DistanceMatrix& d) {
  if (f.n() != d.n())
    throw std::invalid_argument("distortion: point/metric size mismatch");
  EmbeddingReport r;
  for (int i = 0; i < f.n(); ++i)
    for (int j = i + 1; j < f.n(); ++j) {
      double num = f.dist(i, j);
      double den = d.at(i, j).to_double();
      if (num == 0)
        throw std::invalid_argument("distortion: duplicate points " +
                                    std::to_string(i) + " and " +
                                    std::to_string(j));
      if (num / den > r.expansion) {
        r.expansion = num / den;
        r.expansion_pair = {i, j};
      }
      if (den / num > r.contraction) {
        r.contraction = den / num;
        r.contraction_pair = {i, j};
      }
    }
  r.distortion = r.expansion * r.contraction;
  return r;
}

FourPointSlack fourpoint(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                         const Eigen::VectorXd& w, const Eigen::VectorXd& x,
                         double p) {
  if (v.size() != u.size() || w.size() != u.size() || x.size() != u.size())
    throw std::invalid_argument("fourpoint: dimension mismatch");
  if (p < 1) throw std::invalid_argument("fourpoint: p must be >= 1");
  double duv = pnorm(u - v, p), dvw = pnorm(v - w, p);
  double dwx = pnorm(w - x, p), dxu = pnorm(x - u, p);
  double duw = pnorm(u - w, p), dvx = pnorm(v - x, p);
  FourPointSlack s;
  if (p <= 2) {
    double rhs = duv * duv + dvw * dvw + dwx * dwx + dxu * dxu;
    double lhs = duw * duw + (p - 1) * dvx * dvx;
    s.slack_1p2 = rhs - lhs;
    if (rhs - lhs < -1e-9 * (rhs + lhs))
      throw InvariantFailure("fourpoint: negative slack at p <= 2");
  }
  if (p >= 2) {
    auto pw = [p](double t) { return std::pow(t, p); };
    double rhs = std::pow(2.0, p - 2) * (pw(duv) + pw(dvw) + pw(dwx) + pw(dxu));
    double lhs = pw(duw) + pw(dvx);
    s.slack_pg2 = rhs - lhs;
    if (rhs - lhs < -1e-9 * (rhs + lhs))
      throw InvariantFailure("fourpoint: negative slack at p >= 2");
  }
  return s;
}

double poincare_ratio(const MetricGraph& g, const PointConfig& f, double p) {
  if (!g.is_regular())
    throw std::invalid_argument("poincare_ratio: graph must be regular");
  if (f.n() != g.n())
    throw std::invalid_argument("poincare_ratio: size mismatch");
  double pairs = 0;
  for (int i = 0; i < f.n(); ++i)
    for (int j = i + 1; j < f.n(); ++j)
      pairs += 2 * std::pow(f.dist(i, j), p);
  pairs /= double(f.n()) * f.n();
  double edges = 0;
  for (const Edge& e : g.edges()) edges += std::pow(f.dist(e.u, e.v), p);
  edges /= double(g.edges().size());
  if (edges == 0) return 0;  // constant map: 0/0 -> 0 by convention
  return pairs / edges;
}

PointConfig symmetrize(const PointConfig& f, const GroupAction& a, double p) {
  if (a.size() == 0 || a.degree() != f.n())
    throw std::invalid_argument("symmetrize: action does not act on f's domain");
  double scale = std::pow(double(a.size()), -1.0 / p);
  PointConfig out;
  out.p = p;
  out.pts.resize(f.n(), f.dim() * (int)a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    const std::vector<int>& perm = a.perms[j];
    for (int v = 0; v < f.n(); ++v)
      out.pts.row(v).segment((int)j * f.dim(), f.dim()) =
          scale * f.pts.row(perm[v]);
  }
  return out;
}

namespace {

std::vector<std::vector<int>> orbits_of(const GroupAction& a) {
  int n = a.degree();
  std::vector<int> owner(n, -1);
  std::vector<std::vector<int>> orbits;
  for (int v = 0; v < n; ++v) {
    if (owner[v] >= 0) continue;
    std::vector<int> orbit{v};
    owner[v] = (int)orbits.size();
    for (std::size_t h = 0; h < orbit.size(); ++h)
      for (const auto& perm : a.perms) {
        int w = perm[orbit[h]];
        if (owner[w] < 0) {
          owner[w] = (int)orbits.size();
          orbit.push_back(w);
        }
      }
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

// Checks that `value(v)` is constant over each orbit, recording the worst
// relative spread.
template <typename F>
void orbit_uniform(const std::vector<std::vector<int>>& orbits,
                   const std::vector<bool>& eligible, F value,
                   const std::string& label, FactCheck& chk) {
  for (const auto& orbit : orbits) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    int nlive = 0;
    for (int v : orbit) {
      if (!eligible[v]) continue;
      double x = value(v);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
      ++nlive;
    }
    if (nlive < 2) continue;
    double rel = hi > 0 ? (hi - lo) / hi : 0;
    if (rel > chk.err) {
      chk.err = rel;
      chk.worst = label + ", orbit of vertex " + std::to_string(orbit[0]);
    }
    if (rel > 1e-9) chk.pass = false;
  }
}

}  // namespace

FactsReport check_facts(const PointConfig& fbar, const LayeredGraph& v,
                        const GroupAction& a, double p) {
  const int n = fbar.n();
  if (a.degree() != n || v.st.g.n() != n)
    throw std::invalid_argument("check_facts: size mismatch");
  if (fbar.dim() % (int)a.size() != 0)
    throw std::invalid_argument(
        "check_facts: dimension is not a multiple of the action size; "
        "fbar must come from symmetrize");
  FactsReport rep;
  const int s = v.st.s, t = v.st.t;
  const int block = fbar.dim() / (int)a.size();

  // F1: the norm of fbar(s)-fbar(t) must equal the original ||f(s)-f(t)||,
  // which one block recovers up to the |a|^(-1/p) scale.
  {
    Eigen::VectorXd dst = fbar.pts.row(s) - fbar.pts.row(t);
    double whole = pnorm(dst, p);
    double from_block =
        pnorm(dst.segment(0, block), p) * std::pow(double(a.size()), 1.0 / p);
    double rel = std::abs(whole - from_block) / std::max(whole, 1e-300);
    rep.f1.err = rel;
    if (rel > 1e-9) {
      rep.f1.pass = false;
      rep.f1.worst = "||fbar(s)-fbar(t)|| vs block reconstruction";
    }
  }

  auto orbits = orbits_of(a);

  // F2: distance from s uniform over first-layer orbits; from t over last.
  {
    std::vector<bool> first(n, false), last(n, false);
    for (int u = 0; u < n; ++u) {
      if (v.layer[u] == 1) first[u] = true;
      if (v.layer[u] == v.D + 1) last[u] = true;
    }
    orbit_uniform(orbits, first,
                  [&](int u) { return fbar.dist(s, u); },
                  "||fbar(s)-fbar(.)|| on layer 1", rep.f2);
    orbit_uniform(orbits, last,
                  [&](int u) { return fbar.dist(t, u); },
                  "||fbar(t)-fbar(.)|| on layer " + std::to_string(v.D + 1),
                  rep.f2);
  }

  // F3: rail norms uniform orbit-by-orbit for each pair of adjacent layers.
  for (int i = 1; i <= v.D; ++i) {
    std::vector<bool> in_layer(n, false);
    for (int u = 0; u < n; ++u)
      if (v.layer[u] == i) in_layer[u] = true;
    orbit_uniform(orbits, in_layer,
                  [&](int u) {
                    return fbar.dist(u, v.layer_vertex(v.base_vertex[u], i + 1));
                  },
                  "rail norms between layers " + std::to_string(i) + " and " +
                      std::to_string(i + 1),
                  rep.f3);
  }

  // F4 (p == 2 only): within-layer differences orthogonal to fbar(s)-fbar(t).
  if (p == 2) {
    rep.f4_checked = true;
    Eigen::VectorXd z = fbar.pts.row(s) - fbar.pts.row(t);
    double zn = z.norm();
    for (int i = 1; i <= v.D + 1; ++i) {
      std::vector<int> members = v.layer_members(i);
      for (std::size_t x = 0; x < members.size(); ++x)
        for (std::size_t y = x + 1; y < members.size(); ++y) {
          Eigen::VectorXd w = fbar.pts.row(members[x]) - fbar.pts.row(members[y]);
          double wn = w.norm();
          double dot = std::abs(z.dot(w));
          double rel = (zn > 0 && wn > 0) ? dot / (zn * wn) : 0;
          if (rel > rep.f4.err) {
            rep.f4.err = rel;
            rep.f4.worst = "layer " + std::to_string(i) + " pair (" +
                           std::to_string(members[x]) + ", " +
                           std::to_string(members[y]) + ")";
          }
          if (rel > 1e-9) rep.f4.pass = false;
        }
    }
  }
  return rep;
}

double beta_of(const PointConfig& fbar, const LayeredGraph& v, double p) {
  if (fbar.n() != v.st.g.n())
    throw std::invalid_argument("beta_of: size mismatch");
  double beta = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= v.D + 1; ++i) {
    double best = 0;
    for (int ei : v.vertical_edges_of_layer(i)) {
      const Edge& e = v.st.g.edges()[ei];
      best = std::max(best, fbar.dist(e.u, e.v));
    }
    beta = std::min(beta, best);
  }
  return std::isfinite(beta) ? beta : 0;
}

StretchWitness stretch_witness(const PointConfig& f, const LayeredGraph& v,
                               const GroupAction& a, double p) {
  if (f.n() != v.st.g.n())
    throw std::invalid_argument("stretch_witness: size mismatch");
  if (!v.has_tails)
    throw std::invalid_argument(
        "stretch_witness: the margin bound needs the tailed graph");
  DistanceMatrix d = apsp(v.st.g);
  for (int i = 0; i < f.n(); ++i)
    for (int j = i + 1; j < f.n(); ++j) {
      double fij = f.dist(i, j);
      if (fij == 0)
        throw std::invalid_argument("stretch_witness: duplicate points " +
                                    std::to_string(i) + " and " +
                                    std::to_string(j));
      double dij = d.at(i, j).to_double();
      if (fij < dij * (1 - 1e-9))
        throw std::invalid_argument(
            "stretch_witness: contracting input at pair (" +
            std::to_string(i) + ", " + std::to_string(j) + ")");
    }

  GroupAction lift = lift_action(a, v);
  PointConfig fbar = symmetrize(f, lift, p);
  const double q = std::max(p, 2.0);

  StretchWitness w;
  w.beta = beta_of(fbar, v, p);
  double gamma = fbar.dist(v.st.s, v.st.t) / d.at(v.st.s, v.st.t).to_double();
  w.gamma_q = std::pow(gamma, q);
  for (std::size_t ei = 0; ei < v.st.g.edges().size(); ++ei) {
    if (v.edge_class[ei] != EdgeClass::horizontal) continue;
    const Edge& e = v.st.g.edges()[ei];
    double lhs =
        std::pow(fbar.dist(e.u, e.v) / d.at(e.u, e.v).to_double(), q);
    if (lhs > w.lhs) {
      w.lhs = lhs;
      w.edge = {e.u, e.v};
    }
  }
  w.margin = w.lhs - w.gamma_q;
  w.k_hat = w.beta > 0 ? w.margin / std::pow(w.beta, q) : 0;
  if (p == 2 && w.margin < w.beta * w.beta / 36.0 - 1e-9)
    throw InvariantFailure(
        "stretch_witness: margin fell below beta^2/36 at p = 2");
  return w;
}

}  // namespace osl
