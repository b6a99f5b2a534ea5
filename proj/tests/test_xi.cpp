#include <doctest.h>

#include <cmath>
#include <vector>

#include "concentra/numerics.hpp"
#include "concentra/rng.hpp"
#include "concentra/xi.hpp"
#include "oracles.hpp"

using namespace concentra;

TEST_SUITE("numerics") {
  TEST_CASE("adaptive simpson on smooth and kinked integrands") {
    CHECK(numerics::adaptive_simpson([](double x) { return std::exp(x); }, 0, 1) ==
          doctest::Approx(std::exp(1.0) - 1).epsilon(1e-12));
    CHECK(numerics::adaptive_simpson([](double x) { return std::abs(x - 0.3); }, 0, 1) ==
          doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-10));
  }

  TEST_CASE("golden section finds an interior maximum") {
    const auto e = numerics::golden_maximize([](double x) { return -(x - 1.7) * (x - 1.7) + 3; }, 0, 5);
    CHECK(e.x == doctest::Approx(1.7).epsilon(1e-7));
    CHECK(e.value == doctest::Approx(3.0).epsilon(1e-14));
  }

  TEST_CASE("rng is keyed by (seed, stream, counter)") {
    Rng a(5, 2, 9), b(5, 2, 9), c(5, 3, 9), d(5, 2, 10);
    const auto va = a(), vb = b(), vc = c(), vd = d();
    CHECK(va == vb);
    CHECK(va != vc);
    CHECK(va != vd);
  }

  TEST_CASE("normal draws have unit variance") {
    Rng r(1);
    double s = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double z = r.normal();
      s += z;
      s2 += z * z;
    }
    CHECK(std::abs(s / n) < 0.01);
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
  }
}

TEST_SUITE("xi") {
  TEST_CASE("quadratic legendre: value t^2/(4a) at lambda t/(2a)") {
    const auto r = legendre_sup(XiFunction::quadratic(1.0), 2.0);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.lambda_star == doctest::Approx(1.0).epsilon(1e-6));
    for (double a : {0.1, 1.0, 10.0})
      for (double t : {0.01, 1.0, 100.0})
        CHECK(legendre_sup(XiFunction::quadratic(a), t).value == doctest::Approx(t * t / (4 * a)).epsilon(1e-9));
  }

  TEST_CASE("quadratic on a truncated domain: eps^2/(16A) for slope eps/2 inside the domain") {
    const double A = 3.0, K = 5.0;
    auto xi = XiFunction::quadratic(A).scaled(1.0);
    auto xi_k = XiFunction::custom(K, [A](double l) { return A * l * l; });
    for (double eps : {1.0, 10.0, 4 * K * A}) {
      CHECK(legendre_sup(xi_k, eps / 2).value == doctest::Approx(eps * eps / (16 * A)).epsilon(1e-8));
      CHECK(legendre_sup(xi, eps / 2).value == doctest::Approx(eps * eps / (16 * A)).epsilon(1e-9));
    }
    // past the domain the sup is clipped by K
    const double eps = 8 * K * A;
    CHECK(legendre_sup(xi_k, eps / 2).value < eps * eps / (16 * A));
  }

  TEST_CASE("bernstein u=1, t=1 against a dense grid") {
    const auto xi = XiFunction::bernstein(1.0);
    const auto r = legendre_sup(xi, 1.0);
    const double grid = oracle::dense_legendre([&](double l) { return xi.eval_unchecked(l); }, 1.0, 1.0, 1000000);
    CHECK(r.value == doctest::Approx(grid).epsilon(1e-8));
    CHECK(r.value >= 0.1);
    CHECK(xi.domain_limit() == 1.0);
  }

  TEST_CASE("legendre rejects negative xi and skips non-finite values") {
    auto bad = XiFunction::custom(kInf, [](double l) { return -l; });
    CHECK_THROWS_AS(legendre_sup(bad, 1.0), std::domain_error);
    auto holes = XiFunction::custom(kInf, [](double l) { return (l > 2 && l < 3) ? NAN : l * l; });
    CHECK(legendre_sup(holes, 2.0).value == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("mcdiarmid tail: single quadratic and t = 0") {
    std::vector<XiFunction> one{XiFunction::quadratic(0.5)};
    CHECK(mcdiarmid_tail(one, 1.0).bound == doctest::Approx(std::exp(-0.5)).epsilon(1e-9));
    CHECK(mcdiarmid_tail(one, 0.0).bound == 1.0);
  }

  TEST_CASE("identical constant differences: exponent is a quarter of the classical one") {
    for (int n : {1, 5, 17})
      for (double c : {0.3, 1.0, 2.5})
        for (double t : {0.5, 2.0}) {
          std::vector<XiFunction> xs(n, XiFunction::quadratic(c * c / 2));
          const double classical = 2 * t * t / (n * c * c);
          CHECK(classical / mcdiarmid_tail(xs, t).exponent_value == doctest::Approx(4.0).epsilon(1e-12));
        }
  }

  TEST_CASE("series generator: closed forms and term-by-term sums") {
    CHECK(psi_q_series_exponent(0.5, 1.0) == doctest::Approx(std::log(5.0 / 3.0)).epsilon(1e-14));
    const double v = psi_q_series_exponent(0.5, 2.0);
    CHECK(v == doctest::Approx(0.2316520).epsilon(1e-6));  // hand sum: 0.125 + 0.0052083 + 0.0001302 + ...
    CHECK(v <= 0.25);
    for (double q : {1.0, 1.5, 2.0, 3.0})
      for (double u : {0.05, 0.3, 0.8}) {
        CHECK(psi_q_series_exponent(u, q, true) == doctest::Approx(oracle::psi_series(u, q)).epsilon(1e-12));
        CHECK(psi_q_series_exponent(u, q) == doctest::Approx(psi_q_series_exponent(u, q, true)).epsilon(1e-12));
      }
    // q = 2 stays finite and ~u^2/4 far out
    CHECK(std::isfinite(psi_q_series_exponent(200.0, 2.0)));
    CHECK(psi_q_series_exponent(200.0, 2.0) / (200.0 * 200.0 / 4) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(psi_q_series_exponent(0.0, 2.0) == 0.0);
    CHECK(psi_q_series_exponent(1.0, 1.0) == kInf);
  }

  TEST_CASE("scaled and dilated transforms") {
    const auto b = XiFunction::bernstein(0.5);
    const auto s = b.scaled(4.0);
    CHECK(s.domain_limit() == doctest::Approx(8.0));
    CHECK(s(3.0) == doctest::Approx(4.0 * b(0.75)).epsilon(1e-15));
    const auto d = b.dilated(2.0);
    CHECK(d.domain_limit() == doctest::Approx(1.0));
    CHECK(d(0.4) == doctest::Approx(b(0.8)).epsilon(1e-15));
    CHECK_THROWS_AS(b(2.0), std::out_of_range);
  }

  TEST_CASE("mgf envelope check") {
    std::vector<double> grid{0.1, 0.5, 1.0, 2.0};
    std::vector<double> constant(1000, 1.3);
    for (const auto& v : mgf_envelope_check(constant, XiFunction::quadratic(1.3 * 1.3 / 2), grid)) CHECK(v.pass);

    Rng r(3);
    std::vector<double> h(100000);
    for (auto& x : h) x = std::abs(r.normal());
    // Psi_2 norm of |N(0,1)| is sqrt(8/3)
    for (const auto& v : mgf_envelope_check(h, XiFunction::series(2.0, std::sqrt(8.0 / 3.0)), grid)) CHECK(v.pass);

    std::vector<double> pos{0.5, 1.0};
    for (const auto& v : mgf_envelope_check(h, XiFunction::quadratic(0.0), pos)) CHECK_FALSE(v.pass);
  }
}
