#include "oslash/sdp.hpp"

#include <lapacke.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "oslash/errors.hpp"

namespace osl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Full symmetric eigendecomposition; m is replaced by the eigenvectors and
// w gets the eigenvalues in ascending order.
void sym_eig(Eigen::MatrixXd& m, Eigen::VectorXd& w) {
  const int n = (int)m.rows();
  w.resize(n);
  int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, m.data(), n, w.data());
  if (info != 0)
    throw std::runtime_error("c2_bracket: eigensolver failed, info = " +
                             std::to_string(info));
}

// w = P m P for the centering projector P = I - J/n.
void double_center(const Eigen::MatrixXd& m, Eigen::MatrixXd& w) {
  Eigen::VectorXd rm = m.rowwise().mean();
  double gm = rm.mean();
  w = m;
  w.colwise() -= rm;
  w.rowwise() -= rm.transpose();
  w.array() += gm;
}

// True distortion squared ratio bounds of the point set a PSD Gram matrix b
// induces: over pairs, the max and min of (b_ii + b_jj - 2 b_ij) / d2_ij.
struct GramRatios {
  double max_ratio = 0;
  double min_ratio = kInf;
  double chat = kInf;  // realized distortion, sqrt(max/min)
};

GramRatios certify(const Eigen::MatrixXd& b, const Eigen::MatrixXd& d2) {
  GramRatios r;
  const int n = (int)b.rows();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double ratio = (b(i, i) + b(j, j) - 2 * b(i, j)) / d2(i, j);
      r.max_ratio = std::max(r.max_ratio, ratio);
      r.min_ratio = std::min(r.min_ratio, ratio);
    }
  if (r.min_ratio > 0) r.chat = std::sqrt(r.max_ratio / r.min_ratio);
  return r;
}

// One projection onto the negative-type cone {E : PEP <= 0}: subtracts the
// positive part of PEP from E.  Also emits the PSD Gram candidate
// B = -1/2 (PEP)_- that certifies an embedding.
void cone_project(Eigen::MatrixXd& e, Eigen::MatrixXd& gram,
                  Eigen::MatrixXd& scratch, Eigen::VectorXd& w) {
  double_center(e, scratch);
  Eigen::MatrixXd centered = scratch;  // keep PEP; scratch becomes eigvecs
  sym_eig(scratch, w);
  const int n = (int)e.rows();
  int first_pos = 0;
  while (first_pos < n && w[first_pos] <= 0) ++first_pos;
  const int npos = n - first_pos;
  if (npos == 0) {
    gram = -0.5 * centered;
    return;
  }
  Eigen::MatrixXd vp = scratch.rightCols(npos);
  for (int c = 0; c < npos; ++c) vp.col(c) *= std::sqrt(w[first_pos + c]);
  Eigen::MatrixXd wplus = vp * vp.transpose();
  e -= wplus;
  gram = 0.5 * (wplus - centered);  // = -1/2 (PEP)_-
}

struct Best {
  double chat = kInf;
  Eigen::MatrixXd gram;
  double min_ratio = 0;
};

void consider(Best& best, const Eigen::MatrixXd& gram,
              const Eigen::MatrixXd& d2) {
  GramRatios r = certify(gram, d2);
  if (r.chat < best.chat) {
    best.chat = r.chat;
    best.gram = gram;
    best.min_ratio = r.min_ratio;
  }
}

// Lower-bound side.  A PSD matrix B with B1 = 0 forces
// c2^2 >= pos/neg (pos/neg as in the header).  ratio2 is that quotient.
struct Cert {
  double ratio2 = 0;
  Eigen::MatrixXd b;
};

// Extracts the PSD centered part of delta and scores it as a certificate.
// Returns a zero ratio when the PSD content of delta is rounding noise --
// the gap direction of a *feasible* probe decays to numerical dust and
// must not produce a bound.
void consider_cert(Cert& cert, const Eigen::MatrixXd& delta,
                   const Eigen::MatrixXd& d2, Eigen::MatrixXd& scratch,
                   Eigen::VectorXd& w) {
  double_center(delta, scratch);
  const double cnorm = scratch.norm();
  if (cnorm == 0) return;
  sym_eig(scratch, w);
  const int n = (int)delta.rows();
  int fp = 0;
  while (fp < n && w[fp] <= 0) ++fp;
  const int npos = n - fp;
  if (npos == 0) return;
  Eigen::MatrixXd vp = scratch.rightCols(npos);
  for (int c = 0; c < npos; ++c) vp.col(c) *= std::sqrt(w[fp + c]);
  Eigen::MatrixXd b = vp * vp.transpose();
  if (b.norm() <= 1e-10 * cnorm) return;
  double pos = 0, neg = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = b(i, j) * d2(i, j);
      if (v > 0) pos += v; else neg -= v;
    }
  if (neg <= 1e-10 * (pos + neg)) return;  // can't certify infinity
  double r2 = pos / neg;
  if (r2 > cert.ratio2) {
    cert.ratio2 = r2;
    cert.b = std::move(b);
  }
}

struct ProbeStats {
  bool feasible = false;
  long iters = 0;
};

// Douglas-Rachford splitting for the feasibility problem at level c; s is
// the warm-started driver variable (kept across probes).  a = P_cone(s),
// b = P_box(2a - s), s += b - a.  Feasible: a - b -> 0 and the cone-side
// Gram realizes a distortion <= c.  Infeasible: b - a converges to the
// separating functional, whose centered part is minus an optimal dual
// certificate.
ProbeStats probe(const Eigen::MatrixXd& d2, double c, Eigen::MatrixXd& s,
                 Best& best, Cert& cert, const SDPOptions& opt) {
  const int n = (int)d2.rows();
  const double c2 = c * c;
  const double scale = d2.norm();
  Eigen::MatrixXd a, b, gram, scratch, delta;
  Eigen::VectorXd w;
  ProbeStats st;

  double mark_chat = kInf, mark_ratio2 = 0, mark_gap = kInf;
  long last_improve = 0;

  for (long it = 1; it <= opt.max_iters; ++it) {
    st.iters = it;
    a = s;
    cone_project(a, gram, scratch, w);
    consider(best, gram, d2);

    b = 2 * a - s;
    for (int i = 0; i < n; ++i) {
      b(i, i) = 0;
      for (int j = i + 1; j < n; ++j) {
        double v = std::min(std::max(b(i, j), d2(i, j)), c2 * d2(i, j));
        b(i, j) = v;
        b(j, i) = v;
      }
    }
    delta = b - a;
    s += delta;

    double gap = delta.norm();
    if (it % 10 == 0 || gap <= 1e-12 * scale || it == opt.max_iters)
      consider_cert(cert, delta, d2, scratch, w);

    if (best.chat <= c * (1 + opt.accept_rel)) {
      st.feasible = true;
      return st;
    }
    if (gap <= 1e-12 * scale) {
      st.feasible = true;  // iterate sits in both sets
      return st;
    }

    bool moved = false;
    if (best.chat < mark_chat - opt.stall_eps * std::max(1.0, mark_chat)) {
      mark_chat = best.chat;
      moved = true;
    }
    if (cert.ratio2 > mark_ratio2 + opt.stall_eps * std::max(1.0, mark_ratio2)) {
      mark_ratio2 = cert.ratio2;
      moved = true;
    }
    if (gap < mark_gap - opt.stall_eps * std::max(scale, mark_gap)) {
      mark_gap = gap;
      moved = true;
    }
    if (moved) last_improve = it;
    if (it > opt.min_iters && it - last_improve > opt.stall_window) break;
  }
  consider_cert(cert, delta, d2, scratch, w);
  return st;
}

// Re-verifies a certificate from scratch before it is allowed to set lo:
// PSD up to a relative slack, centered, and with the stated ratio.
double verified_lo(const Cert& cert, const Eigen::MatrixXd& d2) {
  if (cert.ratio2 <= 1.0 || cert.b.size() == 0) return 1.0;
  const int n = (int)cert.b.rows();
  Eigen::MatrixXd m = cert.b;
  Eigen::VectorXd w;
  sym_eig(m, w);
  double top = std::max(w[n - 1], 0.0);
  if (top <= 0) return 1.0;
  if (w[0] < -1e-10 * top) return 1.0;
  double rowsum = (cert.b * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff();
  if (rowsum > 1e-8 * top) return 1.0;
  double pos = 0, neg = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = cert.b(i, j) * d2(i, j);
      if (v > 0) pos += v; else neg -= v;
    }
  if (neg <= 0 || pos <= neg) return 1.0;
  return std::sqrt(pos / neg) * (1 - 1e-9);
}

void check_metric(const DistanceMatrix& d) {
  const int n = d.n();
  for (int i = 0; i < n; ++i) {
    if (!(d.at(i, i) == Rat(0)))
      throw std::invalid_argument("c2_bracket: nonzero diagonal");
    for (int j = i + 1; j < n; ++j) {
      if (!(d.at(i, j) == d.at(j, i)))
        throw std::invalid_argument("c2_bracket: asymmetric input");
      if (!(Rat(0) < d.at(i, j)))
        throw std::invalid_argument("c2_bracket: non-positive distance");
    }
  }
  // triangle inequality in doubles; exactness is not needed to reject junk
  Eigen::MatrixXd dd = d.to_double();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (dd(i, j) > dd(i, k) + dd(k, j) + 1e-9 * dd(i, j))
          throw std::invalid_argument("c2_bracket: triangle inequality fails");
}

}  // namespace

SDPBracket c2_bracket(const DistanceMatrix& d, double tol) {
  return c2_bracket(d, tol, SDPOptions{});
}

SDPBracket c2_bracket(const DistanceMatrix& d, double tol,
                      const SDPOptions& opt) {
  const int n = d.n();
  if (n > opt.n_limit)
    throw ResourceLimit("c2_bracket: " + std::to_string(n) +
                        " points exceed the limit of " +
                        std::to_string(opt.n_limit));
  if (tol <= 0) throw std::invalid_argument("c2_bracket: tol must be > 0");
  SDPBracket out;
  if (n <= 1) {
    out.hi = 1.0;
    out.gram = Eigen::MatrixXd::Zero(std::max(n, 1), std::max(n, 1));
    return out;
  }
  check_metric(d);

  Eigen::MatrixXd dd = d.to_double();
  Eigen::MatrixXd d2 = dd.cwiseProduct(dd);

  Best best;
  Cert cert;
  {
    // classical MDS of the metric itself gives the starting upper bound
    Eigen::MatrixXd x0 = d2, gram, scratch;
    Eigen::VectorXd w;
    cone_project(x0, gram, scratch, w);
    consider(best, gram, d2);
    ++out.iterations;
  }
  if (!std::isfinite(best.chat)) {
    // MDS collapsed some pair; rows of the distance matrix never do
    Eigen::MatrixXd fr = dd.rowwise() - dd.colwise().mean();
    consider(best, fr * fr.transpose(), d2);
  }

  // blo/bhi steer probe placement only; the reported bracket moves on
  // certificates alone.
  double lo = 1.0, hi = best.chat;
  double blo = 1.0, bhi = best.chat;
  Eigen::MatrixXd s = d2;  // warm-started splitting variable
  while (hi - lo > tol && bhi - blo > 0.25 * tol) {
    double c = 0.5 * (blo + bhi);
    ProbeStats st = probe(d2, c, s, best, cert, opt);
    out.iterations += st.iters;
    hi = std::min(hi, best.chat);
    lo = std::max(lo, std::min(verified_lo(cert, d2), hi));
    if (st.feasible || best.chat <= c * (1 + opt.accept_rel)) {
      bhi = std::min(bhi, best.chat);
    } else if (lo > c) {
      blo = std::max(blo, lo);  // certificate settles the probe
    } else {
      // stalled without proof either way; guess infeasible, certificates
      // from later probes repair a wrong guess
      blo = std::max(blo, c);
    }
    bhi = std::min(bhi, hi);
    if (blo >= bhi) break;
  }

  out.lo = std::max(1.0, std::min(lo, hi));
  out.hi = hi;
  if (cert.b.size() != 0 && out.lo > 1.0) out.cert = cert.b;
  out.gram = best.gram / best.min_ratio;  // normalized non-contracting
  GramRatios fin = certify(out.gram, d2);
  out.max_violation = std::max(1.0 - fin.min_ratio,
                               fin.max_ratio / (hi * hi) - 1.0);
  out.max_violation = std::max(out.max_violation, 0.0);
  return out;
}

double certificate_lower_bound(const Eigen::MatrixXd& b,
                               const DistanceMatrix& d,
                               const std::vector<int>& ids) {
  const int k = (int)ids.size();
  if (b.rows() != k || b.cols() != k || k < 2)
    throw std::invalid_argument("certificate: matrix/id size mismatch");
  for (int v : ids)
    if (v < 0 || v >= d.n())
      throw std::invalid_argument("certificate: vertex id out of range");
  if ((b - b.transpose()).norm() > 1e-12 * std::max(1.0, b.norm()))
    throw InvariantFailure("certificate is not symmetric");
  Eigen::MatrixXd m = b;
  Eigen::VectorXd w;
  sym_eig(m, w);
  double top = w[k - 1];
  if (top <= 0) throw InvariantFailure("certificate has no positive part");
  if (w[0] < -1e-10 * top)
    throw InvariantFailure("certificate is not positive semidefinite");
  double rowsum = (b * Eigen::VectorXd::Ones(k)).cwiseAbs().maxCoeff();
  if (rowsum > 1e-8 * top)
    throw InvariantFailure("certificate row sums are not zero");
  double pos = 0, neg = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      double dij = d.at(ids[i], ids[j]).to_double();
      double v = b(i, j) * dij * dij;
      if (v > 0) pos += v;
      else neg -= v;
    }
  if (neg <= 0 || pos <= neg)
    throw InvariantFailure("certificate mass ratio proves nothing");
  return std::sqrt(pos / neg) * (1 - 1e-9);
}

}  // namespace osl
