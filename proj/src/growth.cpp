#include "oslash/growth.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "oslash/compose.hpp"
#include "oslash/doubling.hpp"
#include "oslash/embedding.hpp"
#include "oslash/errors.hpp"
#include "oslash/layered.hpp"
#include "oslash/optimize.hpp"
#include "oslash/version.hpp"

namespace osl {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Symmetrization must not move the s-t distance or introduce contraction;
// this is asserted once per experiment, on the depth-1 graph where the
// lifted action lives.
void assert_symmetrization(const LayeredGraph& lg, const GroupAction& base_a,
                           const DistanceMatrix& d) {
  GroupAction a = lift_action(base_a, lg);
  PointConfig f;
  f.p = 2;
  f.pts.resize(d.n(), d.n());
  for (int i = 0; i < d.n(); ++i)
    for (int j = 0; j < d.n(); ++j) f.pts(i, j) = d.at(i, j).to_double();
  PointConfig fbar = symmetrize(f, a, 2);
  FactsReport facts = check_facts(fbar, lg, a, 2);
  if (!facts.f1.pass)
    throw InvariantFailure("growth_experiment: symmetrization moved the s-t "
                           "distance (F1), err = " + num(facts.f1.err));
  EmbeddingReport rep = distortion(fbar, d);
  if (rep.contraction > 1 + 1e-9)
    throw InvariantFailure("growth_experiment: symmetrized map contracts "
                           "some pair by " + num(rep.contraction));
}

}  // namespace

GrowthTable growth_experiment(const BaseGraph& base, int k_max, double tol) {
  return growth_experiment(base, k_max, tol, GrowthOptions{});
}

GrowthTable growth_experiment(const BaseGraph& base, int k_max, double tol,
                              const GrowthOptions& opt) {
  if (k_max < 0)
    throw std::invalid_argument("growth_experiment: k_max must be >= 0");
  if (tol <= 0)
    throw std::invalid_argument("growth_experiment: tol must be > 0");
  for (double p : opt.p_list)
    if (p < 1)
      throw std::invalid_argument("growth_experiment: p values must be >= 1");

  GrowthTable table;
  table.p_list = opt.p_list;
  table.k_requested = k_max;

  LayeredGraph lg = add_tails(stretch(base.g));
  SpectralReport spec = mu2(base.g);
  const int m = base.g.n();

  // truncate before building anything oversized
  int k_eff = k_max;
  for (int k = 1; k <= k_max; ++k) {
    auto [v, e] = power_size(lg.st, k);
    if (v < 0 || e < 0 || v > opt.sdp.n_limit) {
      k_eff = k - 1;
      table.warning = "k_max truncated to " + std::to_string(k_eff) +
                      ": depth " + std::to_string(k) +
                      (v < 0 ? " overflows" :
                       " has " + std::to_string(v) + " vertices, over the c2 limit of " +
                       std::to_string(opt.sdp.n_limit));
      break;
    }
  }

  for (int k = 0; k <= k_eff; ++k) {
    GrowthRow row;
    row.k = k;
    row.mu2 = spec.mu2;
    row.degree = spec.degree;
    row.seed = opt.seed;
    if (k == 0) {
      row.predicted = 0;
    } else if (spec.degree < 2) {
      row.predicted = std::nan("");
    } else {
      row.predicted = std::sqrt(spec.mu2 * k / spec.degree) *
                      (std::log((double)m) / std::log((double)spec.degree));
    }

    STGraph x = power(lg.st, k);
    row.n = x.g.n();
    DistanceMatrix d = apsp(x.g);

    // power() relabels vertices, so the check runs on lg's own labeling
    if (k == 1) assert_symmetrization(lg, base.action, apsp(lg.st.g));

    SDPBracket b = c2_bracket(d, tol, opt.sdp);
    row.c2_lo = b.lo;
    row.c2_hi = b.hi;
    row.sdp_iterations = b.iterations;

    if (row.n <= opt.doubling_n_limit) {
      DoublingReport dr = doubling_constant(d, opt.doubling_exact_limit);
      row.lambda_lo = dr.lambda_lo;
      row.lambda_hi = dr.lambda_hi;
      row.doubling_center = dr.witness_center;
      row.doubling_radius = dr.witness_radius.str();
    }

    for (std::size_t pi = 0; pi < opt.p_list.size(); ++pi) {
      int dim = std::min(row.n, opt.opt_dim);
      unsigned cell_seed = opt.seed + 101u * (unsigned)k + 7u * (unsigned)pi;
      PointConfig f =
          optimize_embedding(d, opt.p_list[pi], dim, cell_seed, opt.opt_iters);
      row.cp_ub.push_back(distortion(f, d).distortion);
    }

    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_growth_csv(std::ostream& out, const GrowthTable& t) {
  out << "k,n,mu2,degree,lambda_lo,lambda_hi,c2_lo,c2_hi";
  for (double p : t.p_list) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%g", p);
    out << ",ub_p" << buf;
  }
  out << ",predicted,seed,version\n";
  for (const GrowthRow& r : t.rows) {
    out << r.k << ',' << r.n << ',' << num(r.mu2) << ',' << r.degree << ',';
    if (r.lambda_lo >= 0) out << r.lambda_lo;
    out << ',';
    if (r.lambda_hi >= 0) out << r.lambda_hi;
    out << ',' << num(r.c2_lo) << ',' << num(r.c2_hi);
    for (double ub : r.cp_ub) out << ',' << num(ub);
    out << ',' << num(r.predicted) << ',' << r.seed << ',' << kVersion
        << '\n';
  }
}

void write_growth_json(std::ostream& out, const GrowthTable& t) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["k_requested"] = t.k_requested;
  j["p_list"] = t.p_list;
  if (!t.warning.empty()) j["warning"] = t.warning;
  j["rows"] = nlohmann::ordered_json::array();
  for (const GrowthRow& r : t.rows) {
    nlohmann::ordered_json row;
    row["k"] = r.k;
    row["n"] = r.n;
    row["mu2"] = r.mu2;
    row["degree"] = r.degree;
    if (r.lambda_lo >= 0) {
      row["lambda_lo"] = r.lambda_lo;
      row["lambda_hi"] = r.lambda_hi;
    }
    row["c2_lo"] = r.c2_lo;
    row["c2_hi"] = r.c2_hi;
    for (std::size_t i = 0; i < r.cp_ub.size(); ++i) {
      nlohmann::ordered_json cell;
      cell["p"] = t.p_list[i];
      cell["ub"] = r.cp_ub[i];
      row["cp"].push_back(cell);
    }
    if (std::isnan(r.predicted))
      row["predicted"] = nullptr;
    else
      row["predicted"] = r.predicted;
    row["seed"] = r.seed;
    nlohmann::ordered_json wit;
    wit["sdp_iterations"] = r.sdp_iterations;
    if (r.doubling_center >= 0) {
      wit["doubling_center"] = r.doubling_center;
      wit["doubling_radius"] = r.doubling_radius;
    }
    row["witness"] = wit;
    j["rows"].push_back(std::move(row));
  }
  out << j.dump(2) << '\n';
}

}  // namespace osl
