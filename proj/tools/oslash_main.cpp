// Command-line front end: builds the graph families, runs the analyses,
// and emits machine-readable reports.  Exit codes: 0 success, 1 usage or
// unreadable input, 2 invariant/assertion failure, 3 resource limit.
#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oslash/base_graphs.hpp"
#include "oslash/compose.hpp"
#include "oslash/distance.hpp"
#include "oslash/doubling.hpp"
#include "oslash/embedding.hpp"
#include "oslash/errors.hpp"
#include "oslash/graph.hpp"
#include "oslash/growth.hpp"
#include "oslash/layered.hpp"
#include "oslash/optimize.hpp"
#include "oslash/sdp.hpp"
#include "oslash/version.hpp"

using nlohmann::json;
using namespace osl;

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mirrors every flag: values present in the JSON file fill in options the
// command line left at their defaults.
json load_spec(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw Usage("cannot open spec file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Usage("spec file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw Usage("spec file must hold a JSON object");
  return j;
}

template <typename T>
void fill(const CLI::Option* opt, const json& spec, const char* key, T& var) {
  if (opt->count() > 0 || !spec.contains(key)) return;
  try {
    var = spec.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Usage(std::string("spec key '") + key + "': " + e.what());
  }
}

struct BaseFlags {
  std::string base = "k2";
  int m = 8;
  std::vector<int> gens = {1, 2};
  int r = 3;
};

void add_base_flags(CLI::App* cmd, BaseFlags& f) {
  cmd->add_option("--base", f.base, "base graph: k2, cayley, hypercube")
      ->check(CLI::IsMember({"k2", "cayley", "hypercube"}));
  cmd->add_option("--m", f.m, "cycle length for --base cayley");
  cmd->add_option("--gens", f.gens, "circulant generators for --base cayley")
      ->delimiter(',');
  cmd->add_option("--r", f.r, "dimension for --base hypercube");
}

void fill_base_flags(const CLI::App* cmd, const json& spec, BaseFlags& f) {
  fill(cmd->get_option("--base"), spec, "base", f.base);
  fill(cmd->get_option("--m"), spec, "m", f.m);
  fill(cmd->get_option("--gens"), spec, "gens", f.gens);
  fill(cmd->get_option("--r"), spec, "r", f.r);
}

BaseGraph make_base(const BaseFlags& f) {
  if (f.base == "k2") return k2();
  if (f.base == "cayley") return cayley_cycle(f.m, f.gens);
  return hypercube(f.r);
}

MetricGraph load_graph(const std::string& path) {
  try {
    return read_graph_file(path);
  } catch (const std::exception& e) {
    throw Usage(std::string(e.what()));
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Usage("cannot write " + path);
  return out;
}

// Coordinates realizing a PSD Gram matrix, trimmed to its numerical rank.
PointConfig gram_points(const Eigen::MatrixXd& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const Eigen::VectorXd& w = es.eigenvalues();
  const int n = (int)gram.rows();
  double top = std::max(w[n - 1], 0.0);
  int keep = 0;
  for (int i = 0; i < n; ++i)
    if (w[i] > 1e-12 * top) ++keep;
  PointConfig f;
  f.p = 2;
  f.pts.resize(n, std::max(keep, 1));
  f.pts.setZero();
  for (int c = 0; c < keep; ++c) {
    int i = n - keep + c;
    f.pts.col(c) = es.eigenvectors().col(i) * std::sqrt(w[i]);
  }
  return f;
}

int cmd_build(const BaseFlags& bf, int k, const std::string& out,
              long long vertex_limit) {
  BaseGraph base = make_base(bf);
  LayeredGraph stretched = stretch(base.g);
  LayeredGraph tailed = add_tails(stretched);

  auto [pv, pe] = power_size(tailed.st, k);
  if (pv < 0 || pv > vertex_limit)
    throw ResourceLimit("build: depth " + std::to_string(k) + " needs " +
                        (pv < 0 ? std::string("too many") : std::to_string(pv)) +
                        " vertices (limit " + std::to_string(vertex_limit) + ")");
  STGraph power_k = power(tailed.st, k);

  write_graph_file(out + ".base.txt", base.g);
  write_graph_file(out + ".stretched.txt", stretched.st.g, stretched.st.s,
                   stretched.st.t);
  write_layers_file(out + ".stretched.layers.txt", stretched);
  write_graph_file(out + ".tailed.txt", tailed.st.g, tailed.st.s, tailed.st.t);
  write_layers_file(out + ".tailed.layers.txt", tailed);
  write_graph_file(out + ".power" + std::to_string(k) + ".txt", power_k.g,
                   power_k.s, power_k.t);

  std::cout << "base      n=" << base.g.n() << " e=" << base.g.edges().size()
            << "\nstretched n=" << stretched.st.g.n()
            << " e=" << stretched.st.g.edges().size()
            << "\ntailed    n=" << tailed.st.g.n()
            << " e=" << tailed.st.g.edges().size() << "\npower" << k
            << "    n=" << power_k.g.n() << " e=" << power_k.g.edges().size()
            << "\n";
  return 0;
}

int cmd_analyze(const std::string& graph, const std::string& which,
                int exact_limit, unsigned seed, const std::string& out_path) {
  MetricGraph gg = load_graph(graph);
  std::ostringstream rep;
  int rc = 0;
  if (which == "spectral") {
    SpectralReport s = mu2(gg);
    rep << "mu2,degree,residual\n"
        << s.mu2 << ',' << s.degree << ',' << s.residual << '\n';
  } else if (which == "doubling") {
    DistanceMatrix d = apsp(gg);
    DoublingReport dr = doubling_constant(d, exact_limit);
    write_doubling_csv(rep, dr);
  } else if (which == "poincare") {
    // Fiedler-vector configuration plus random ones; max ratio must stay
    // within the spectral bound d/mu2
    SpectralReport s = mu2(gg);
    if (s.degree < 1) throw Usage("poincare: graph has an isolated vertex");
    const int n = gg.n();
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : gg.edges()) {
      lap(e.u, e.v) -= 1;
      lap(e.v, e.u) -= 1;
      lap(e.u, e.u) += 1;
      lap(e.v, e.v) += 1;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
    PointConfig eig;
    eig.p = 2;
    eig.pts = es.eigenvectors().col(1);
    double bound = s.mu2 > 0 ? s.degree / s.mu2 : 0;
    double worst = poincare_ratio(gg, eig, 2);
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 100; ++trial) {
      PointConfig f;
      f.p = 2;
      f.pts.resize(gg.n(), 3);
      for (int i = 0; i < f.pts.size(); ++i) f.pts.data()[i] = gauss(rng);
      worst = std::max(worst, poincare_ratio(gg, f, 2));
    }
    rep << "ratio_max,bound,seed\n" << worst << ',' << bound << ',' << seed
        << '\n';
    if (s.mu2 > 0 && worst > bound * (1 + 1e-8)) {
      std::cerr << "poincare ratio " << worst << " exceeds d/mu2 = " << bound
                << "\n";
      rc = 2;
    }
  } else {
    throw Usage("unknown analysis '" + which + "'");
  }
  if (out_path.empty()) {
    std::cout << rep.str();
  } else {
    open_out(out_path) << rep.str();
  }
  return rc;
}

int cmd_c2(const std::string& graph, double tol, int n_limit,
           const std::string& out_path, const std::string& points_path) {
  MetricGraph gg = load_graph(graph);
  DistanceMatrix d = apsp(gg);
  SDPOptions opt;
  opt.n_limit = n_limit;
  SDPBracket b = c2_bracket(d, tol, opt);
  std::cout << "c2 in [" << b.lo << ", " << b.hi << "]  iterations "
            << b.iterations << "  max_violation " << b.max_violation << "\n";
  if (!out_path.empty()) {
    json j;
    j["n"] = d.n();
    j["lo"] = b.lo;
    j["hi"] = b.hi;
    j["iterations"] = b.iterations;
    j["max_violation"] = b.max_violation;
    j["version"] = kVersion;
    open_out(out_path) << j.dump(2) << '\n';
  }
  if (!points_path.empty()) {
    PointConfig f = gram_points(b.gram);
    write_points_file(points_path, f);
  }
  return 0;
}

int cmd_optimize(const std::string& graph, double p, int dim, int iters,
                 unsigned seed, const std::string& out_path) {
  MetricGraph gg = load_graph(graph);
  DistanceMatrix d = apsp(gg);
  PointConfig f = optimize_embedding(d, p, std::min(dim, d.n()), seed, iters);
  EmbeddingReport rep = distortion(f, d);
  std::cout << "distortion " << rep.distortion << "  (expansion "
            << rep.expansion << ", contraction " << rep.contraction
            << ")  p=" << p << " dim=" << f.dim() << " seed=" << seed << "\n";
  if (!out_path.empty()) write_points_file(out_path, f);
  return 0;
}

// Witness file: "cert <k>" header, a line of k vertex ids, then a k x k
// PSD matrix row per line.  Verified from scratch against the graph metric:
// PSD, zero row sums, and the positive/negative mass ratio give a certified
// c2 lower bound on the full graph.
double verify_cert_file(const std::string& path, const DistanceMatrix& d) {
  std::ifstream in(path);
  if (!in) throw Usage("cannot open certificate " + path);
  std::string tag;
  int k = 0;
  in >> tag >> k;
  if (tag != "cert" || k < 2 || k > d.n())
    throw Usage("malformed certificate header in " + path);
  std::vector<int> ids(k);
  for (int& v : ids) {
    in >> v;
    if (!in || v < 0 || v >= d.n())
      throw Usage("certificate vertex id out of range in " + path);
  }
  Eigen::MatrixXd b(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (!(in >> b(i, j))) throw Usage("truncated certificate " + path);
  return certificate_lower_bound(b, d, ids);
}

int cmd_witness(const std::string& graph, const std::string& points_path,
                const std::string& cert_path, double claim) {
  MetricGraph gg = load_graph(graph);
  DistanceMatrix d = apsp(gg);
  if (!points_path.empty()) {
    PointConfig f;
    try {
      f = read_points_file(points_path);
    } catch (const std::exception& e) {
      throw Usage(std::string(e.what()));
    }
    EmbeddingReport rep = distortion(f, d);
    std::cout << "distortion " << rep.distortion << "  expansion "
              << rep.expansion << "  contraction " << rep.contraction << "\n";
    if (rep.contraction > 1 + 1e-9)
      throw InvariantFailure("configuration contracts some pair");
    if (claim > 0 && rep.distortion > claim * (1 + 1e-9))
      throw InvariantFailure("distortion exceeds the claimed bound");
  }
  if (!cert_path.empty()) {
    double lo = verify_cert_file(cert_path, d);
    std::cout << "certified c2 lower bound " << std::setprecision(17) << lo
              << "\n";
    if (claim > 0 && lo < claim)
      throw InvariantFailure("certificate proves only " + std::to_string(lo) +
                             ", claim was " + std::to_string(claim));
  }
  if (points_path.empty() && cert_path.empty())
    throw Usage("witness: need --points and/or --cert");
  return 0;
}

int cmd_growth(const BaseFlags& bf, int k_max, const std::vector<double>& ps,
               double tol, unsigned seed, const std::string& out) {
  BaseGraph base = make_base(bf);
  GrowthOptions opt;
  if (!ps.empty()) opt.p_list = ps;
  opt.seed = seed;
  GrowthTable t = growth_experiment(base, k_max, tol, opt);

  std::ostringstream csv;
  write_growth_csv(csv, t);
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    open_out(out + ".csv") << csv.str();
    std::ostringstream js;
    write_growth_json(js, t);
    open_out(out + ".json") << js.str();
    std::cout << "wrote " << out << ".csv and " << out << ".json\n";
  }
  if (!t.warning.empty()) std::cerr << "warning: " << t.warning << "\n";

  // row-level assertions, collected rather than fail-fast
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const GrowthRow& r = t.rows[i];
    if (r.c2_lo > r.c2_hi * (1 + 1e-9))
      failures.push_back("row k=" + std::to_string(r.k) +
                         ": lower bound exceeds upper bound");
    for (std::size_t pi = 0; pi < t.p_list.size(); ++pi)
      if (t.p_list[pi] == 2.0 && r.cp_ub[pi] < r.c2_lo * (1 - 1e-6))
        failures.push_back("row k=" + std::to_string(r.k) +
                           ": p=2 upper bound beats the certified lower bound");
  }
  for (const std::string& f : failures) std::cerr << "assertion failed: " << f
                                                  << "\n";
  return failures.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "oslash " + std::string(kVersion) +
      " -- recursive metric-graph workbench.\n"
      "Builds composition powers of tailed stretched expander graphs and\n"
      "verifies their geometry: doubling constants, spectral gaps, Poincare\n"
      "ratios, and certified distortion brackets.\n\n"
      "Growth CSV columns: k,n,mu2,degree,lambda_lo,lambda_hi,c2_lo,c2_hi,\n"
      "ub_p<P> (one optimizer upper-bound column per requested P),\n"
      "predicted,seed,version.  Identical spec and seed give byte-identical\n"
      "CSV.  lambda columns are blank when the row was too large for the\n"
      "doubling search; predicted is blank for degree-1 bases."};
  app.require_subcommand(1);
  std::string spec_path;
  app.add_option("--spec", spec_path,
                 "JSON file mirroring every flag (explicit flags win)")
      ->expected(1);

  // build
  auto* cb = app.add_subcommand("build", "construct and write a family");
  BaseFlags bf_build;
  add_base_flags(cb, bf_build);
  int build_k = 1;
  long long build_limit = 200000;
  std::string build_out = "family";
  cb->add_option("--k", build_k, "composition depth")->check(CLI::NonNegativeNumber);
  cb->add_option("--out", build_out, "output path prefix");
  cb->add_option("--vertex-limit", build_limit, "refuse larger powers");

  // analyze
  auto* ca = app.add_subcommand("analyze", "run one analysis on a graph file");
  std::string an_graph, an_which = "spectral", an_out;
  int an_exact = 30;
  unsigned an_seed = 1;
  ca->add_option("--graph", an_graph, "input graph file")->required();
  ca->add_option("--which", an_which, "spectral, doubling, or poincare")
      ->check(CLI::IsMember({"spectral", "doubling", "poincare"}));
  ca->add_option("--exact-limit", an_exact, "doubling exact-cover ball size");
  ca->add_option("--seed", an_seed, "seed for the poincare random configs");
  ca->add_option("--out", an_out, "write the CSV here instead of stdout");

  // c2
  auto* cc = app.add_subcommand("c2", "certified distortion bracket");
  std::string c2_graph, c2_out, c2_points;
  double c2_tol = 1e-3;
  int c2_nlimit = 1500;
  cc->add_option("--graph", c2_graph, "input graph file")->required();
  cc->add_option("--tol", c2_tol, "bracket width target");
  cc->add_option("--n-limit", c2_nlimit, "refuse larger metrics");
  cc->add_option("--out", c2_out, "write a JSON report");
  cc->add_option("--points", c2_points,
                 "write coordinates realizing the upper bound");

  // optimize
  auto* co = app.add_subcommand("optimize", "gradient upper bound on c_p");
  std::string op_graph, op_out;
  double op_p = 2.0;
  int op_dim = 10, op_iters = 3000;
  unsigned op_seed = 1;
  co->add_option("--graph", op_graph, "input graph file")->required();
  co->add_option("--p", op_p, "norm exponent")->check(CLI::Range(1.0, 64.0));
  co->add_option("--dim", op_dim, "embedding dimension");
  co->add_option("--iters", op_iters, "optimizer iterations");
  co->add_option("--seed", op_seed, "restart seed");
  co->add_option("--out", op_out, "write the point configuration");

  // witness
  auto* cw = app.add_subcommand("witness",
                                "verify a stored embedding or certificate");
  std::string wi_graph, wi_points, wi_cert;
  double wi_claim = 0;
  cw->add_option("--graph", wi_graph, "input graph file")->required();
  cw->add_option("--points", wi_points, "embedding to verify");
  cw->add_option("--cert", wi_cert, "dual certificate to verify");
  cw->add_option("--claim", wi_claim,
                 "assert the witness reaches this distortion value");

  // growth
  auto* cg = app.add_subcommand("growth", "depth-vs-distortion experiment");
  BaseFlags bf_growth;
  add_base_flags(cg, bf_growth);
  int gr_k = 2;
  std::vector<double> gr_p;
  double gr_tol = 1e-3;
  unsigned gr_seed = 1;
  std::string gr_out;
  cg->add_option("--k", gr_k, "maximum composition depth")
      ->check(CLI::NonNegativeNumber);
  cg->add_option("--p", gr_p, "norm exponents for upper-bound columns")
      ->delimiter(',');
  cg->add_option("--tol", gr_tol, "bracket width target");
  cg->add_option("--seed", gr_seed, "experiment seed (echoed in every row)");
  cg->add_option("--out", gr_out, "path prefix for CSV + JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    json spec = load_spec(spec_path);
    if (cb->parsed()) {
      fill_base_flags(cb, spec, bf_build);
      fill(cb->get_option("--k"), spec, "k", build_k);
      fill(cb->get_option("--out"), spec, "out", build_out);
      return cmd_build(bf_build, build_k, build_out, build_limit);
    }
    if (ca->parsed()) {
      fill(ca->get_option("--which"), spec, "which", an_which);
      fill(ca->get_option("--exact-limit"), spec, "exact_limit", an_exact);
      fill(ca->get_option("--seed"), spec, "seed", an_seed);
      return cmd_analyze(an_graph, an_which, an_exact, an_seed, an_out);
    }
    if (cc->parsed()) {
      fill(cc->get_option("--tol"), spec, "tol", c2_tol);
      return cmd_c2(c2_graph, c2_tol, c2_nlimit, c2_out, c2_points);
    }
    if (co->parsed()) {
      fill(co->get_option("--p"), spec, "p", op_p);
      fill(co->get_option("--seed"), spec, "seed", op_seed);
      return cmd_optimize(op_graph, op_p, op_dim, op_iters, op_seed, op_out);
    }
    if (cw->parsed())
      return cmd_witness(wi_graph, wi_points, wi_cert, wi_claim);
    if (cg->parsed()) {
      fill_base_flags(cg, spec, bf_growth);
      fill(cg->get_option("--k"), spec, "k_max", gr_k);
      fill(cg->get_option("--p"), spec, "p_list", gr_p);
      fill(cg->get_option("--tol"), spec, "tol", gr_tol);
      fill(cg->get_option("--seed"), spec, "seed", gr_seed);
      fill(cg->get_option("--out"), spec, "out", gr_out);
      return cmd_growth(bf_growth, gr_k, gr_p, gr_tol, gr_seed, gr_out);
    }
  } catch (const Usage& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvariantFailure& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return 2;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
