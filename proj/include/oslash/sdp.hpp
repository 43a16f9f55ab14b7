#pragma once

#include <Eigen/Dense>

#include "oslash/distance.hpp"

namespace osl {

// Result of the c2 search.  Both ends are certified:
//
//  hi — `gram` is positive semidefinite and its induced point set has true
//       measured distortion hi, so c2 <= hi unconditionally.
//  lo — `cert` is a PSD matrix B with B1 = 0.  For any embedding f with
//       ||f(i)-f(j)|| >= d_ij and ||f(i)-f(j)|| <= c d_ij,
//         sum_ij B_ij ||f(i)-f(j)||^2 = -2 tr(B G) <= 0,
//       which forces c^2 >= pos/neg with
//         pos = sum_{B_ij>0, i<j} B_ij d_ij^2,
//         neg = sum_{B_ij<0, i<j} (-B_ij) d_ij^2.
//       lo is sqrt(pos/neg) shaved by a 1e-9 relative guard for the
//       numerical slack in "PSD" and "B1 = 0", so c2 >= lo holds up to
//       that guard.  When no certificate was found, lo = 1 and cert is
//       empty (every metric has c2 >= 1).
struct SDPBracket {
  double lo = 1.0;
  double hi = 0.0;
  Eigen::MatrixXd gram;       // feasible Gram matrix realizing hi
  Eigen::MatrixXd cert;       // dual certificate for lo (empty if lo == 1)
  double max_violation = 0.0; // worst relative pair violation of gram at hi
  long iterations = 0;        // total splitting iterations across all probes
};

struct SDPOptions {
  int max_iters = 20000;     // per feasibility probe
  int min_iters = 200;       // before a stall may be declared
  int stall_window = 500;    // iterations without progress ends a probe
  double stall_eps = 1e-10;  // relative progress threshold
  double accept_rel = 1e-7;  // realized distortion <= c*(1+accept_rel) => feasible
  int n_limit = 1500;
};

// Bracket for the least Euclidean distortion of a finite metric.  Bisection
// on c; the feasibility set {E in the negative-type cone, d^2 <= E_ij <=
// c^2 d^2, E_ii = 0} is attacked with Douglas-Rachford splitting between the
// cone and the box.  Every cone projection yields a PSD Gram candidate whose
// exact distortion is measured (these drive hi down), and the splitting gap
// direction b - a yields dual certificates as above (these drive lo up): when
// the probe is infeasible the gap converges to the separating functional,
// whose centered part is -B for an optimal certificate B.  Probe placement
// uses heuristics (stalls, gap size), but the reported bracket only ever
// moves on a certificate, so a bad heuristic costs tightness, not
// correctness.  Search stops when hi - lo <= tol or no probe can improve
// the bracket.
SDPBracket c2_bracket(const DistanceMatrix& d, double tol);
SDPBracket c2_bracket(const DistanceMatrix& d, double tol,
                      const SDPOptions& opt);

// Re-verifies a stored dual certificate from scratch and returns the c2
// lower bound it proves for the metric restricted to `ids` -- and therefore
// for all of d, since a restriction can only embed better.  Checks symmetry,
// positive semidefiniteness, and zero row sums (tolerances relative to the
// top eigenvalue), recomputes pos/neg from exact distances, and applies the
// same 1e-9 guard as c2_bracket.  Throws std::invalid_argument on a
// shape/id mismatch and InvariantFailure when any check fails.
double certificate_lower_bound(const Eigen::MatrixXd& b,
                               const DistanceMatrix& d,
                               const std::vector<int>& ids);

}  // namespace osl
