#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include <json.hpp>

#include "oslash/base_graphs.hpp"
#include "oslash/growth.hpp"
#include "test_util.hpp"

using namespace osl;

namespace {

GrowthOptions quick_options() {
  GrowthOptions o;
  o.p_list = {2.0};
  o.seed = 42;
  o.opt_iters = 1000;
  return o;
}

std::string csv_of(const GrowthTable& t) {
  std::ostringstream s;
  write_growth_csv(s, t);
  return s.str();
}

}  // namespace

TEST_CASE("growth table for the two-point base, depths 0 and 1") {
  GrowthTable t = growth_experiment(k2(), 1, 1e-3, quick_options());
  REQUIRE(t.rows.size() == 2);
  CHECK(t.warning.empty());

  const GrowthRow& r0 = t.rows[0];
  CHECK(r0.k == 0);
  CHECK(r0.n == 2);
  CHECK(r0.c2_lo == doctest::Approx(1.0));
  CHECK(r0.c2_hi == doctest::Approx(1.0));
  CHECK(r0.predicted == 0.0);
  CHECK(r0.lambda_lo == 2);
  CHECK(r0.lambda_hi == 2);

  const GrowthRow& r1 = t.rows[1];
  CHECK(r1.k == 1);
  CHECK(r1.n == 8);
  CHECK(r1.mu2 == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r1.degree == 1);
  // K_2 is degree 1, so the predicted growth term is left empty
  CHECK(std::isnan(r1.predicted));
  // frozen oracle bracket for the depth-1 tailed stretched K_2
  CHECK(r1.c2_lo > 1.15);
  CHECK(r1.c2_lo < r1.c2_hi);
  CHECK(r1.c2_hi < 1.17);
  CHECK(r1.cp_ub.size() == 1);
  CHECK(r1.cp_ub[0] >= r1.c2_lo * (1 - 1e-9));
  CHECK(r1.lambda_lo == 5);
  CHECK(r1.lambda_hi == 5);

  // brackets grow with depth
  CHECK(r1.c2_lo > r0.c2_hi);
}

TEST_CASE("growth CSV round: header, reruns byte-identical") {
  GrowthOptions o = quick_options();
  o.p_list = {2.0, 1.5};
  GrowthTable t1 = growth_experiment(k2(), 1, 1e-3, o);
  GrowthTable t2 = growth_experiment(k2(), 1, 1e-3, o);
  std::string c1 = csv_of(t1), c2 = csv_of(t2);
  CHECK(c1 == c2);
  CHECK(c1.substr(0, c1.find('\n')) ==
        "k,n,mu2,degree,lambda_lo,lambda_hi,c2_lo,c2_hi,ub_p2,ub_p1.5,"
        "predicted,seed,version");
  // one header plus one line per row
  int lines = 0;
  for (char ch : c1)
    if (ch == '\n') ++lines;
  CHECK(lines == 3);

  // a different seed changes the experiment but stays well-formed
  o.seed = 43;
  GrowthTable t3 = growth_experiment(k2(), 1, 1e-3, o);
  std::string c3 = csv_of(t3);
  CHECK(c3.substr(0, c3.find('\n')) == c1.substr(0, c1.find('\n')));
}

TEST_CASE("growth JSON carries witness data and null predicted") {
  GrowthTable t = growth_experiment(k2(), 1, 1e-3, quick_options());
  std::ostringstream s;
  write_growth_json(s, t);
  nlohmann::json j = nlohmann::json::parse(s.str());
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["predicted"] == 0.0);
  CHECK(j["rows"][1]["predicted"].is_null());
  CHECK(j["rows"][1]["witness"]["sdp_iterations"].is_number());
  CHECK(j["rows"][1]["witness"]["doubling_radius"].is_string());
  CHECK(j["rows"][1]["c2_lo"].get<double>() > 1.15);
  CHECK(j["p_list"].size() == 1);
}

TEST_CASE("growth truncates overlarge depths with a warning") {
  GrowthOptions o = quick_options();
  o.sdp.n_limit = 10;  // depth 2 would need 80 vertices
  GrowthTable t = growth_experiment(k2(), 5, 1e-3, o);
  CHECK(t.k_requested == 5);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows.back().k == 1);
  CHECK(t.warning.find("truncated") != std::string::npos);
  CHECK(t.warning.find("80") != std::string::npos);
}

TEST_CASE("growth depth 0 only") {
  GrowthTable t = growth_experiment(cayley_cycle(8, {1, 2}), 0, 1e-3,
                                    quick_options());
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].n == 2);
  CHECK(t.rows[0].c2_hi == doctest::Approx(1.0));
  // C8 with chords is 4-regular with a real spectral gap, so the
  // prediction column is live from depth 1 on
  CHECK(t.rows[0].predicted == 0.0);
  CHECK(t.rows[0].degree == 4);
}

TEST_CASE("growth input validation") {
  CHECK_THROWS_AS(growth_experiment(k2(), -1, 1e-3),
                  std::invalid_argument);
  CHECK_THROWS_AS(growth_experiment(k2(), 1, 0.0),
                  std::invalid_argument);
  GrowthOptions o = quick_options();
  o.p_list = {0.5};
  CHECK_THROWS_AS(growth_experiment(k2(), 1, 1e-3, o),
                  std::invalid_argument);
}
