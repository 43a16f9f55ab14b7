#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "oslash/graph.hpp"

namespace osl {

// Exact shortest-path metric.  check() verifies symmetry, zero diagonal,
// positivity off the diagonal and the triangle inequality (O(n^3); meant for
// tests and small instances, not the hot path).
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(int n) : n_(n), d_(std::size_t(n) * n, Rat(0)) {}

  int n() const { return n_; }
  const Rat& at(int i, int j) const { return d_[std::size_t(i) * n_ + j]; }
  Rat& at(int i, int j) { return d_[std::size_t(i) * n_ + j]; }

  void check() const;

  Eigen::MatrixXd to_double() const;
  Rat max() const;

 private:
  int n_ = 0;
  std::vector<Rat> d_;
};

// Single-source shortest paths (Dijkstra, exact rational weights).
// Throws if some vertex is unreachable, naming the separated pair.
std::vector<Rat> sssp(const MetricGraph& g, int src);

DistanceMatrix apsp(const MetricGraph& g);

Rat st_length(const STGraph& g);

// max over v of d(s,v) + d(v,t); >= st_length, with equality iff every vertex
// lies on an s-t geodesic
Rat tri(const STGraph& g);

// Tests whether dh restricted to `subset` is a scaled copy of dg: a bijection
// f with dh(f(x), f(y)) == C * dg(x, y) for a single constant C > 0.  If
// `given` is supplied it is verified as-is (given[i] = image of g-vertex i);
// otherwise all bijections are searched, which requires dg.n() <= 10.
// Exact: lengths are rational, so no tolerance is involved.
struct CopyMatch {
  bool match = false;
  Rat scale{0};
};
CopyMatch is_copy(const DistanceMatrix& dh, const std::vector<int>& subset,
                  const DistanceMatrix& dg,
                  const std::optional<std::vector<int>>& given = std::nullopt);

}  // namespace osl
