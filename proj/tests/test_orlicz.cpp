#include <doctest.h>

#include <cmath>
#include <vector>

#include "concentra/orlicz.hpp"
#include "concentra/rng.hpp"
#include "concentra/xi.hpp"
#include "oracles.hpp"

using namespace concentra;

TEST_SUITE("orlicz") {
  TEST_CASE("constant samples have closed-form norms") {
    std::vector<double> ones(100, 1.0);
    const auto e1 = orlicz::luxemburg_norm(ones, 1.0);
    const auto e2 = orlicz::luxemburg_norm(ones, 2.0);
    CHECK(e1.norm == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-9));
    CHECK(e2.norm == doctest::Approx(1.0 / std::sqrt(std::log(2.0))).epsilon(1e-9));
    CHECK(e1.criterion_at_norm <= 1.0);
  }

  TEST_CASE("standard normal at q = 2 is near sqrt(8/3)") {
    Rng r(42, streams::kNormEstimate);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = r.normal();
    const auto e = orlicz::luxemburg_norm(xs, 2.0);
    CHECK(std::abs(e.norm / std::sqrt(8.0 / 3.0) - 1.0) < 0.02);
    CHECK(e.norm == doctest::Approx(oracle::luxemburg(xs, 2.0)).epsilon(1e-8));
  }

  TEST_CASE("luxemburg agrees with a brute-force bisection on mixed samples") {
    Rng r(9);
    for (double q : {1.0, 1.5, 2.0}) {
      std::vector<double> xs(500);
      for (auto& x : xs) x = r.exponential() * (r.sign());
      CHECK(orlicz::luxemburg_norm(xs, q).norm == doctest::Approx(oracle::luxemburg(xs, q)).epsilon(1e-8));
    }
  }

  TEST_CASE("weighted norm equals the unweighted one on repeated samples") {
    std::vector<double> vals{0.5, 2.0, -1.0};
    std::vector<double> w{0.2, 0.5, 0.3};
    std::vector<double> rep;
    for (int i = 0; i < 2; ++i) rep.push_back(0.5);
    for (int i = 0; i < 5; ++i) rep.push_back(2.0);
    for (int i = 0; i < 3; ++i) rep.push_back(-1.0);
    for (double q : {1.0, 2.0})
      CHECK(orlicz::luxemburg_norm_weighted(vals, w, q).norm ==
            doctest::Approx(orlicz::luxemburg_norm(rep, q).norm).epsilon(1e-9));
  }

  TEST_CASE("all-zero samples have zero norm") {
    std::vector<double> z(10, 0.0);
    CHECK(orlicz::luxemburg_norm(z, 2.0).norm == 0.0);
  }

  TEST_CASE("orlicz generator") {
    for (double q : {1.0, 2.0})
      for (double n : {0.5, 3.0}) CHECK(orlicz::xi_psi_q(n, q)(0.0) == 0.0);
    CHECK(orlicz::xi_psi_q(1.0, 1.0)(0.5) == doctest::Approx(0.5108256237659907).epsilon(1e-12));
    CHECK(orlicz::xi_psi_q(1.0, 1.0).domain_limit() == doctest::Approx(1.0));
  }

  TEST_CASE("sub-gaussian tail") {
    std::vector<double> one{1.0};
    CHECK(orlicz::subgauss_tail(one, 2.0).bound == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(orlicz::subgauss_tail(one, 1e-9).bound == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> norms{0.5, 1.0, 2.0};
    std::vector<XiFunction> xs;
    for (double v : norms) xs.push_back(XiFunction::quadratic(v * v));
    for (double t : {0.1, 1.0, 5.0})
      CHECK(orlicz::subgauss_tail(norms, t).exponent_value ==
            doctest::Approx(mcdiarmid_tail(xs, t).exponent_value).epsilon(1e-9));
  }

  TEST_CASE("sub-exponential tail") {
    std::vector<double> one{1.0};
    CHECK(orlicz::subexp_tail(one, 1.0).bound == doctest::Approx(std::exp(-0.1)).epsilon(1e-12));
    std::vector<double> same(7, 1.0);
    CHECK(orlicz::subexp_tail(same, 3.0).exponent_value == doctest::Approx(9.0 / (8 * 7 + 6)).epsilon(1e-12));
    // closed form is a relaxation of the bernstein chain
    std::vector<double> norms{0.3, 0.7, 1.1};
    std::vector<XiFunction> xs;
    for (double v : norms) xs.push_back(XiFunction::bernstein(v));
    for (double t = 0.05; t < 20; t *= 1.7)
      CHECK(orlicz::subexp_tail(norms, t).bound >= mcdiarmid_tail(xs, t).bound * (1 - 1e-12));
    std::vector<double> zeros{0.0, 0.0};
    CHECK(orlicz::subexp_tail(zeros, 1.0).degenerate);
  }

  TEST_CASE("markov tail check") {
    std::vector<double> c(100, 2.0);
    CHECK(orlicz::orlicz_tail_check(c, 1.0, 2.5).empirical_fraction == 0.0);
    const auto small = orlicz::orlicz_tail_check(c, 2.0, 1e-3);
    CHECK(small.envelope == 1.0);
    Rng r(5);
    std::vector<double> ex(200000);
    for (auto& x : ex) x = r.exponential();
    const auto chk = orlicz::orlicz_tail_check(ex, 1.0, 5.0);
    CHECK(chk.empirical_fraction == doctest::Approx(std::exp(-5.0)).epsilon(0.2));
    CHECK(chk.empirical_fraction <= chk.envelope);
  }
}
