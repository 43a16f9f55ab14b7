#include "oslash/optimize.hpp"

#include <lapacke.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace osl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRestarts = 6;

// Classical scaling coordinates: top eigenpairs of -1/2 P d^2 P.  Used as
// the first restart; random restarts explore, this one lands near the l2
// optimum immediately and never strands a low-dim search in a bad ordering.
Eigen::MatrixXd mds_coords(const Eigen::MatrixXd& dd, int dim) {
  const int n = (int)dd.rows();
  Eigen::MatrixXd b = -0.5 * dd.cwiseProduct(dd);
  Eigen::VectorXd rm = b.rowwise().mean();
  double gm = rm.mean();
  b.colwise() -= rm;
  b.rowwise() -= rm.transpose();
  b.array() += gm;
  Eigen::VectorXd w(n);
  LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, b.data(), n, w.data());
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, dim);
  for (int c = 0; c < dim && c < n; ++c) {
    double lam = w[n - 1 - c];
    if (lam <= 0) break;
    x.col(c) = b.col(n - 1 - c) * std::sqrt(lam);
  }
  return x;
}

// d||v||_p / dv, one coordinate at a time, with the p-norm already in hand.
double pnorm_grad_coord(double vc, double norm, double p) {
  if (norm == 0) return 0;
  if (p == 2) return vc / norm;
  double a = std::abs(vc);
  if (a == 0) return 0;
  double s = vc > 0 ? 1.0 : -1.0;
  return s * std::pow(a / norm, p - 1);
}

double true_distortion(const Eigen::MatrixXd& x, const Eigen::MatrixXd& dd,
                       double p, double* min_ratio_out = nullptr) {
  const int n = (int)x.rows();
  double maxr = 0, minr = kInf;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double r = pnorm(x.row(i) - x.row(j), p) / dd(i, j);
      maxr = std::max(maxr, r);
      minr = std::min(minr, r);
    }
  if (min_ratio_out) *min_ratio_out = minr;
  return minr > 0 ? maxr / minr : kInf;
}

}  // namespace

PointConfig optimize_embedding(const DistanceMatrix& d, double p, int dim,
                               unsigned seed, int iters) {
  if (p < 1) throw std::invalid_argument("optimize_embedding: p must be >= 1");
  if (dim < 1) throw std::invalid_argument("optimize_embedding: dim must be >= 1");
  if (iters < 1) throw std::invalid_argument("optimize_embedding: iters must be >= 1");
  const int n = d.n();
  Eigen::MatrixXd dd = d.to_double();
  double dscale = n > 1 ? dd.maxCoeff() : 1.0;

  Eigen::MatrixXd best_x;
  double best_dist = kInf;

  for (int restart = 0; restart < kRestarts && n > 1; ++restart) {
    std::mt19937 rng(seed * 977u + (unsigned)restart);
    std::normal_distribution<double> gauss(0.0, 0.5 * dscale);
    Eigen::MatrixXd x(n, dim);
    if (restart == 0) {
      x = mds_coords(dd, dim);
    } else {
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < dim; ++c) x(i, c) = gauss(rng);
    }

    {
      double dist = true_distortion(x, dd, p);
      if (dist < best_dist) {
        best_dist = dist;
        best_x = x;
      }
    }

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, dim);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, dim);
    Eigen::MatrixXd g(n, dim);
    const double b1 = 0.9, b2 = 0.999, adam_eps = 1e-9;
    const double tau0 = 0.5, tau1 = 1e-3;
    const double lr0 = 0.05, lr1 = 1e-3;

    for (int it = 0; it < iters; ++it) {
      double frac = iters > 1 ? double(it) / (iters - 1) : 1.0;
      double tau = tau0 * std::pow(tau1 / tau0, frac);
      double lr = lr0 * std::pow(lr1 / lr0, frac) * dscale;

      // pass 1: log-ratio range for a stable softmax
      double lmax = -kInf, lmin = kInf;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          double nij = pnorm(x.row(i) - x.row(j), p);
          double l = std::log(std::max(nij, 1e-300) / dd(i, j));
          lmax = std::max(lmax, l);
          lmin = std::min(lmin, l);
        }
      // pass 2: softmax weights at both ends and the gradient
      double zmax = 0, zmin = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          double nij = pnorm(x.row(i) - x.row(j), p);
          double l = std::log(std::max(nij, 1e-300) / dd(i, j));
          zmax += std::exp((l - lmax) / tau);
          zmin += std::exp((lmin - l) / tau);
        }
      g.setZero();
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          Eigen::VectorXd diff = x.row(i) - x.row(j);
          double nij = pnorm(diff, p);
          double l = std::log(std::max(nij, 1e-300) / dd(i, j));
          double wplus = std::exp((l - lmax) / tau) / zmax;
          double wminus = std::exp((lmin - l) / tau) / zmin;
          double coeff = wplus - wminus;
          if (coeff == 0 || nij == 0) continue;
          for (int c = 0; c < dim; ++c) {
            double gc = coeff * pnorm_grad_coord(diff[c], nij, p) / nij;
            g(i, c) += gc;
            g(j, c) -= gc;
          }
        }

      double bc1 = 1 - std::pow(b1, it + 1), bc2 = 1 - std::pow(b2, it + 1);
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < dim; ++c) {
          m(i, c) = b1 * m(i, c) + (1 - b1) * g(i, c);
          v(i, c) = b2 * v(i, c) + (1 - b2) * g(i, c) * g(i, c);
          x(i, c) -= lr * (m(i, c) / bc1) /
                     (std::sqrt(v(i, c) / bc2) + adam_eps);
        }

      if (it % 50 == 49 || it == iters - 1) {
        double dist = true_distortion(x, dd, p);
        if (dist < best_dist) {
          best_dist = dist;
          best_x = x;
        }
      }
    }
  }

  PointConfig out;
  out.p = p;
  if (n <= 1) {
    out.pts = Eigen::MatrixXd::Zero(n, dim);
    return out;
  }
  double minr = 0;
  true_distortion(best_x, dd, p, &minr);
  out.pts = minr > 0 ? (best_x / minr).eval() : best_x;
  return out;
}

}  // namespace osl
