#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "oslash/base_graphs.hpp"
#include "oslash/sdp.hpp"

namespace osl {

struct GrowthOptions {
  std::vector<double> p_list;    // extra optimizer upper-bound columns
  unsigned seed = 1;
  SDPOptions sdp;                // sdp.n_limit also truncates the table
  int doubling_n_limit = 128;    // lambda columns are skipped above this
  int doubling_exact_limit = 30;
  int opt_iters = 3000;          // optimizer budget per (k, p) cell
  int opt_dim = 10;              // embedding dimension, capped at n
};

struct GrowthRow {
  int k = 0;
  int n = 0;
  double mu2 = 0;                // of the base graph
  int degree = 0;                // of the base graph
  int lambda_lo = -1;            // -1 = skipped (size cap)
  int lambda_hi = -1;
  double c2_lo = 1.0;
  double c2_hi = 1.0;
  std::vector<double> cp_ub;     // aligned with p_list; upper bounds only
  double predicted = 0;          // sqrt(mu2 k / deg) * log_deg(m); the
                                 // reference growth shape.  0 at k = 0,
                                 // NaN when deg < 2 (log_deg needs deg >= 2)
  unsigned seed = 0;

  // witness payload for the json flavor
  long sdp_iterations = 0;
  int doubling_center = -1;
  std::string doubling_radius;
};

struct GrowthTable {
  std::vector<GrowthRow> rows;
  std::vector<double> p_list;
  int k_requested = 0;
  std::string warning;           // nonempty iff k_max was truncated
};

// One row per depth k = 0..k_max of the tailed stretched power family over
// `base`: size, base spectral data, doubling bracket, c2 bracket, optimizer
// upper bounds for every requested p, and the reference prediction.  Depths
// whose vertex count exceeds sdp.n_limit (or whose size overflows) are
// dropped and reported through `warning`.  Also asserts, at k = 1, that
// symmetrization over the lifted base action preserves the s-t distance and
// non-contraction (InvariantFailure otherwise).  Deterministic for a fixed
// (base, k_max, tol, options).
GrowthTable growth_experiment(const BaseGraph& base, int k_max, double tol);
GrowthTable growth_experiment(const BaseGraph& base, int k_max, double tol,
                              const GrowthOptions& opt);

// CSV: fixed columns k,n,mu2,degree,lambda_lo,lambda_hi,c2_lo,c2_hi, then
// one ub_p<value> column per requested p, then predicted,seed,version.
// Skipped lambda cells are empty.  Byte-identical for identical inputs.
void write_growth_csv(std::ostream& out, const GrowthTable& t);

// Same table plus per-row witness data (sdp iteration counts, doubling
// witness ball, per-p embedding dimensions).
void write_growth_json(std::ostream& out, const GrowthTable& t);

}  // namespace osl
