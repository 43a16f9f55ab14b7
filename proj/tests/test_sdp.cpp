#include <doctest.h>

#include <lapacke.h>

#include <cmath>
#include <random>

#include "oslash/base_graphs.hpp"
#include "oslash/compose.hpp"
#include "oslash/distance.hpp"
#include "oslash/embedding.hpp"
#include "oslash/errors.hpp"
#include "oslash/layered.hpp"
#include "oslash/optimize.hpp"
#include "oslash/sdp.hpp"
#include "test_util.hpp"

using namespace osl;

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kC5 = 1.0 / std::cos(M_PI / 5);     // regular pentagon
const double kStar = 2.0 / std::sqrt(3.0);       // K_{1,3}

MetricGraph star3() {
  return MetricGraph(4, {{0, 1, Rat(1)}, {0, 2, Rat(1)}, {0, 3, Rat(1)}});
}

MetricGraph complete(int n) {
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) es.push_back({i, j, Rat(1)});
  return MetricGraph(n, std::move(es));
}

// Re-derives the lower bound from the returned certificate: B must be PSD
// (up to relative slack), have vanishing row sums, and reproduce lo.
void audit_certificate(const SDPBracket& b, const DistanceMatrix& d) {
  REQUIRE(b.cert.size() > 0);
  const int n = (int)b.cert.rows();
  REQUIRE(n == d.n());
  Eigen::MatrixXd m = b.cert;
  Eigen::VectorXd w(n);
  REQUIRE(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, m.data(), n,
                         w.data()) == 0);
  double top = w[n - 1];
  CHECK(top > 0);
  CHECK(w[0] >= -1e-10 * top);
  CHECK((b.cert * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() <=
        1e-8 * top);
  double pos = 0, neg = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double dij = d.at(i, j).to_double();
      double v = b.cert(i, j) * dij * dij;
      if (v > 0) pos += v; else neg -= v;
    }
  REQUIRE(neg > 0);
  CHECK(b.lo <= std::sqrt(pos / neg) * (1 - 1e-9) + 1e-12);
}

// Distortion the Gram matrix actually realizes, independent of the library.
double gram_distortion(const Eigen::MatrixXd& g, const DistanceMatrix& d) {
  double maxr = 0, minr = 1e300;
  for (int i = 0; i < d.n(); ++i)
    for (int j = i + 1; j < d.n(); ++j) {
      double dij = d.at(i, j).to_double();
      double r = (g(i, i) + g(j, j) - 2 * g(i, j)) / (dij * dij);
      maxr = std::max(maxr, r);
      minr = std::min(minr, r);
    }
  REQUIRE(minr > 0);
  return std::sqrt(maxr / minr);
}

}  // namespace

TEST_CASE("paths are isometrically embeddable") {
  MetricGraph p5(5, {{0, 1, Rat(1)}, {1, 2, Rat(2)}, {2, 3, Rat(1)},
                     {3, 4, Rat(3)}});
  SDPBracket b = c2_bracket(apsp(p5), 1e-3);
  CHECK(b.lo == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.hi == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(b.lo <= b.hi);
}

TEST_CASE("C4 bracket pins sqrt(2)") {
  DistanceMatrix d = apsp(cayley_cycle(4, {1}).g);
  SDPBracket b = c2_bracket(d, 1e-3);
  CHECK(b.lo <= kSqrt2 + 1e-12);
  CHECK(b.hi >= kSqrt2 - 1e-12);
  CHECK(b.hi <= kSqrt2 + 1e-3);
  CHECK(b.lo >= kSqrt2 - 1e-3);
  audit_certificate(b, d);
  // the realizing Gram really does attain hi
  CHECK(gram_distortion(b.gram, d) == doctest::Approx(b.hi).epsilon(1e-9));
  CHECK(b.max_violation <= 1e-7);
}

TEST_CASE("C5 bracket pins the regular pentagon value") {
  DistanceMatrix d = apsp(cayley_cycle(5, {1}).g);
  SDPBracket b = c2_bracket(d, 1e-3);
  CHECK(b.lo <= kC5 + 1e-12);
  CHECK(b.hi >= kC5 - 1e-12);
  CHECK(b.hi - b.lo <= 1e-3);
  audit_certificate(b, d);
}

TEST_CASE("complete graphs are simplices") {
  SDPBracket b = c2_bracket(apsp(complete(5)), 1e-4);
  CHECK(b.lo == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.hi == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("K_{1,3} bracket pins 2/sqrt(3)") {
  DistanceMatrix d = apsp(star3());
  SDPBracket b = c2_bracket(d, 1e-3);
  CHECK(b.lo <= kStar + 1e-12);
  CHECK(b.hi >= kStar - 1e-12);
  CHECK(b.hi - b.lo <= 1e-3);
  audit_certificate(b, d);
}

TEST_CASE("bracket is scale invariant") {
  MetricGraph c4s(4, {{0, 1, Rat(7, 2)}, {1, 2, Rat(7, 2)}, {2, 3, Rat(7, 2)},
                      {3, 0, Rat(7, 2)}});
  SDPBracket a = c2_bracket(apsp(cayley_cycle(4, {1}).g), 1e-4);
  SDPBracket b = c2_bracket(apsp(c4s), 1e-4);
  CHECK(a.lo == doctest::Approx(b.lo).epsilon(1e-9));
  CHECK(a.hi == doctest::Approx(b.hi).epsilon(1e-9));
}

TEST_CASE("tiny metrics") {
  SDPBracket b1 = c2_bracket(DistanceMatrix(1), 1e-3);
  CHECK(b1.lo == 1.0);
  CHECK(b1.hi == 1.0);

  DistanceMatrix d2(2);
  d2.at(0, 1) = d2.at(1, 0) = Rat(5);
  SDPBracket b2 = c2_bracket(d2, 1e-3);
  CHECK(b2.lo == 1.0);
  CHECK(b2.hi == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("input validation") {
  DistanceMatrix d = apsp(cayley_cycle(4, {1}).g);
  CHECK_THROWS_AS(c2_bracket(d, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(c2_bracket(d, -1e-3), std::invalid_argument);

  SDPOptions small;
  small.n_limit = 3;
  CHECK_THROWS_AS(c2_bracket(d, 1e-3, small), ResourceLimit);

  DistanceMatrix bad = d;
  bad.at(1, 2) = Rat(99);  // asymmetric
  CHECK_THROWS_AS(c2_bracket(bad, 1e-3), std::invalid_argument);

  bad = d;
  bad.at(1, 1) = Rat(1);  // nonzero diagonal
  CHECK_THROWS_AS(c2_bracket(bad, 1e-3), std::invalid_argument);

  bad = d;
  bad.at(0, 3) = bad.at(3, 0) = Rat(0);  // coincident points
  CHECK_THROWS_AS(c2_bracket(bad, 1e-3), std::invalid_argument);

  bad = d;
  bad.at(0, 2) = bad.at(2, 0) = Rat(50);  // triangle inequality broken
  CHECK_THROWS_AS(c2_bracket(bad, 1e-3), std::invalid_argument);
}

TEST_CASE("stored certificates re-verify, also on submetrics") {
  DistanceMatrix d4 = apsp(cayley_cycle(4, {1}).g);
  SDPBracket b = c2_bracket(d4, 1e-3);
  REQUIRE(b.cert.size() > 0);
  std::vector<int> all{0, 1, 2, 3};
  double lo = certificate_lower_bound(b.cert, d4, all);
  CHECK(lo >= b.lo - 1e-12);
  CHECK(lo <= kSqrt2 + 1e-12);

  // a face of the cube carries the C4 metric, so the same matrix certifies
  // sqrt(2) for the whole cube
  DistanceMatrix dq = apsp(hypercube(3).g);
  double lo3 = certificate_lower_bound(b.cert, dq, {0, 1, 3, 2});
  CHECK(lo3 == doctest::Approx(lo).epsilon(1e-12));

  Eigen::MatrixXd tam = b.cert;
  tam(0, 1) += 0.1;  // breaks symmetry
  CHECK_THROWS_AS(certificate_lower_bound(tam, d4, all), InvariantFailure);
  Eigen::MatrixXd neg = -b.cert;
  CHECK_THROWS_AS(certificate_lower_bound(neg, d4, all), InvariantFailure);
  CHECK_THROWS_AS(certificate_lower_bound(b.cert, d4, {0, 1, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(certificate_lower_bound(b.cert, d4, {0, 1, 2, 9}),
                  std::invalid_argument);
}

TEST_CASE("random graphs: bracket well formed and certificate honest") {
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 25; ++trial) {
    STGraph g = testing::random_st_graph(rng, 7, 4);
    DistanceMatrix d = apsp(g.g);
    SDPBracket b = c2_bracket(d, 1e-3);
    CAPTURE(trial);
    CHECK(b.lo >= 1.0);
    CHECK(b.lo <= b.hi + 1e-12);
    CHECK(gram_distortion(b.gram, d) == doctest::Approx(b.hi).epsilon(1e-9));
    CHECK(b.max_violation <= 1e-7);
    if (b.lo > 1.0) audit_certificate(b, d);

    // the optimizer's embedding is a genuine upper bound; it must never
    // undercut the certified lower bound
    PointConfig f = optimize_embedding(d, 2.0, std::min(d.n(), 6), trial, 400);
    EmbeddingReport r = distortion(f, d);
    CHECK(r.distortion >= b.lo * (1 - 1e-9));
  }
}

TEST_CASE("stretched tailed K2: SDP and optimizer agree") {
  LayeredGraph g1 = add_tails(stretch(k2().g));
  DistanceMatrix d = apsp(g1.st.g);
  SDPBracket b = c2_bracket(d, 1e-3);
  CHECK(b.lo >= 1.15);
  CHECK(b.hi <= 1.17);
  CHECK(b.lo <= b.hi);
  audit_certificate(b, d);

  PointConfig f = optimize_embedding(d, 2.0, 6, 1, 1500);
  EmbeddingReport r = distortion(f, d);
  CHECK(r.distortion >= b.lo * (1 - 1e-9));
  CHECK(r.distortion <= b.hi * 1.01);
}

TEST_CASE("optimizer: path embeds a line exactly in one dimension") {
  MetricGraph p3(3, {{0, 1, Rat(1)}, {1, 2, Rat(1)}});
  DistanceMatrix d = apsp(p3);
  PointConfig f = optimize_embedding(d, 2.0, 1, 7, 800);
  EmbeddingReport r = distortion(f, d);
  CHECK(r.distortion == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.contraction <= 1.0 + 1e-12);
}

TEST_CASE("optimizer: C4 in the plane reaches sqrt(2) at p=2") {
  DistanceMatrix d = apsp(cayley_cycle(4, {1}).g);
  PointConfig f = optimize_embedding(d, 2.0, 2, 3, 2000);
  EmbeddingReport r = distortion(f, d);
  CHECK(r.distortion >= kSqrt2 - 1e-9);  // c2(C4), no embedding beats it
  CHECK(r.distortion <= kSqrt2 + 1e-3);
}

TEST_CASE("optimizer: C4 embeds isometrically in l1") {
  DistanceMatrix d = apsp(cayley_cycle(4, {1}).g);
  PointConfig f = optimize_embedding(d, 1.0, 2, 3, 2000);
  EmbeddingReport r = distortion(f, d);
  CHECK(r.distortion <= 1.0 + 1e-3);
}

TEST_CASE("optimizer: star needs 2/sqrt(3) at p=2") {
  DistanceMatrix d = apsp(star3());
  PointConfig f = optimize_embedding(d, 2.0, 3, 11, 2000);
  EmbeddingReport r = distortion(f, d);
  CHECK(r.distortion >= kStar - 1e-9);
  CHECK(r.distortion <= kStar + 1e-3);
}

TEST_CASE("optimizer: deterministic per seed") {
  DistanceMatrix d = apsp(star3());
  PointConfig a = optimize_embedding(d, 2.0, 3, 42, 300);
  PointConfig b = optimize_embedding(d, 2.0, 3, 42, 300);
  REQUIRE(a.pts.rows() == b.pts.rows());
  REQUIRE(a.pts.cols() == b.pts.cols());
  CHECK((a.pts - b.pts).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("optimizer: argument validation") {
  DistanceMatrix d = apsp(star3());
  CHECK_THROWS_AS(optimize_embedding(d, 0.5, 2, 1, 100), std::invalid_argument);
  CHECK_THROWS_AS(optimize_embedding(d, 2.0, 0, 1, 100), std::invalid_argument);
  CHECK_THROWS_AS(optimize_embedding(d, 2.0, 2, 1, 0), std::invalid_argument);
}

TEST_CASE("optimizer: p=3 and p=1.5 give sane embeddings") {
  DistanceMatrix d = apsp(cayley_cycle(5, {1}).g);
  for (double p : {1.5, 3.0}) {
    PointConfig f = optimize_embedding(d, p, 3, 5, 1000);
    CHECK(f.p == p);
    EmbeddingReport r = distortion(f, d);
    CHECK(r.distortion >= 1.0);
    CHECK(r.distortion < 1.3);
    CHECK(r.contraction <= 1.0 + 1e-12);
  }
}
