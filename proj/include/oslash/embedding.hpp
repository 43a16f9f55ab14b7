#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "oslash/base_graphs.hpp"
#include "oslash/distance.hpp"
#include "oslash/layered.hpp"

namespace osl {

// A finite point configuration f : V -> R^dim evaluated in the l_p norm.
// Row v of `pts` is f(v).
struct PointConfig {
  Eigen::MatrixXd pts;
  double p = 2.0;

  int n() const { return (int)pts.rows(); }
  int dim() const { return (int)pts.cols(); }
  double dist(int i, int j) const;  // ||f(i) - f(j)||_p
};

double pnorm(const Eigen::VectorXd& v, double p);

// Text format: header "n dim p", then one coordinate line per vertex.
void write_points(std::ostream& out, const PointConfig& f);
void write_points_file(const std::string& path, const PointConfig& f);
PointConfig read_points(std::istream& in);
PointConfig read_points_file(const std::string& path);

struct EmbeddingReport {
  double expansion = 0;    // max ||f(x)-f(y)||_p / d(x,y)
  double contraction = 0;  // max d(x,y) / ||f(x)-f(y)||_p
  double distortion = 0;   // expansion * contraction
  std::pair<int, int> expansion_pair{-1, -1};
  std::pair<int, int> contraction_pair{-1, -1};
};

// Exact max ratios over all pairs.  Throws on duplicate points (f must be
// injective) and on size mismatch.
EmbeddingReport distortion(const PointConfig& f, const DistanceMatrix& d);

// Quadrilateral u,v,w,x with diagonals (u,w) and (v,x); each slack is
// RHS - LHS of the four-point inequality valid for that exponent:
//   1 <= p <= 2:  ||u-w||^2 + (p-1)||x-v||^2  <=  sum of squared sides
//   p >= 2:       ||u-w||^p + ||x-v||^p       <=  2^(p-2) * sum of sides^p
// Both are populated at p == 2 (where they coincide).  A negative slack
// beyond rounding noise trips an InvariantFailure.
struct FourPointSlack {
  std::optional<double> slack_1p2;
  std::optional<double> slack_pg2;
};
FourPointSlack fourpoint(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                         const Eigen::VectorXd& w, const Eigen::VectorXd& x,
                         double p);

// (mean over ordered vertex pairs of ||f(x)-f(y)||_p^p) /
// (mean over edges of ||f(x)-f(y)||_p^p), with 0/0 -> 0.  Requires g regular.
double poincare_ratio(const MetricGraph& g, const PointConfig& f, double p);

// Concatenates f over the orbit of a lifted action, scaled by |a|^(-1/p):
// block j of fbar(x) is |a|^(-1/p) * f(perm_j(x)).  Output dimension is
// |a| * dim(f).
PointConfig symmetrize(const PointConfig& f, const GroupAction& a, double p);

struct FactCheck {
  bool pass = true;
  double err = 0;     // worst relative deviation seen
  std::string worst;  // description of the worst offender
};

// Structural facts about a symmetrized configuration fbar on a stretched
// graph, with `a` the same lifted action that produced fbar:
//   f1: ||fbar(s)-fbar(t)|| equals ||f(s)-f(t)|| recovered from one block
//   f2: ||fbar(s)-fbar(.)|| uniform over each lifted orbit of the first
//       layer, and symmetrically for t and the last layer
//   f3: rail norms ||fbar(v^(i))-fbar(v^(i+1))|| uniform over each orbit
//   f4: <fbar(s)-fbar(t), fbar(u^(i))-fbar(v^(i))> == 0 (p == 2 only)
struct FactsReport {
  FactCheck f1, f2, f3, f4;
  bool f4_checked = false;
  bool all_pass() const {
    return f1.pass && f2.pass && f3.pass && (!f4_checked || f4.pass);
  }
};
FactsReport check_facts(const PointConfig& fbar, const LayeredGraph& v,
                        const GroupAction& a, double p);

// Largest beta such that every layer has a vertical edge of image length
// >= beta: min over layers of the max vertical-edge norm.
double beta_of(const PointConfig& fbar, const LayeredGraph& v, double p);

struct StretchWitness {
  std::pair<int, int> edge{-1, -1};  // a horizontal edge of the graph
  double lhs = 0;       // ||fbar(x)-fbar(y)||_p^q / d(x,y)^q at the witness
  double gamma_q = 0;   // (||fbar(s)-fbar(t)||_p / d(s,t))^q
  double beta = 0;
  double margin = 0;    // lhs - gamma_q
  double k_hat = 0;     // margin / beta^q, the empirical constant
};

// Symmetrizes f under the lift of the base action `a`, computes gamma and
// beta, and scans every horizontal edge for the largest normalized image
// length to the power q = max(p, 2).  At p == 2 the margin is guaranteed to
// be at least beta^2/36 and this is asserted; for other p the constant is
// only reported (k_hat).  Throws on contracting or non-injective input.
StretchWitness stretch_witness(const PointConfig& f, const LayeredGraph& v,
                               const GroupAction& a, double p);

}  // namespace osl
