#include <doctest.h>

#include <cmath>
#include <vector>

#include "concentra/complexity.hpp"
#include "concentra/numerics.hpp"
#include "concentra/rng.hpp"
#include "oracles.hpp"

using namespace concentra;
using namespace concentra::complexity;

TEST_SUITE("complexity") {
  TEST_CASE("unit-ball covering numbers") {
    CHECK(unit_ball_log_cover(1.0, 1) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
    CHECK(unit_ball_log_cover(2.0, 5) == 0.0);
    CHECK(unit_ball_log_cover(1.999, 5) > 0.0);
    const auto b = CoveringSpec::ball(3, 2.5);
    CHECK(b.diameter() == 5.0);
    CHECK(b.log_cover(1.0) == doctest::Approx(3 * std::log1p(5.0)).epsilon(1e-14));
  }

  TEST_CASE("greedy cover of the unit disk at 0.5") {
    std::vector<std::vector<double>> pts;
    for (int i = -40; i <= 40; ++i)
      for (int j = -40; j <= 40; ++j) {
        const double x = i / 40.0, y = j / 40.0;
        if (x * x + y * y <= 1.0) pts.push_back({x, y});
      }
    CHECK(greedy_cover_size(pts, 0.5) <= 25u);
    CHECK(greedy_cover_size(pts, 2.0) == 1u);
  }

  TEST_CASE("entropy bound for unit balls") {
    for (int k : {1, 4, 16})
      for (std::size_t n : {64u, 1024u, 65536u}) {
        const auto cover = CoveringSpec::unit_ball(k);
        const double v = entropy_integral_bound(cover, n);
        CHECK(v <= 32 * std::sqrt(static_cast<double>(k) / n));
      }
    const auto cover = CoveringSpec::unit_ball(4);
    const double oracle = oracle::dense_eta_dudley([&](double e) { return cover.log_cover(e); }, 2.0, 1024, 4000);
    CHECK(entropy_integral_bound(cover, 1024) == doctest::Approx(oracle).epsilon(1e-6));
  }

  TEST_CASE("degenerate and interior-minimum entropy bounds") {
    CHECK(entropy_integral_bound(CoveringSpec::finite_set({{1.0, 2.0}}), 10) == 0.0);
    // finite set: log N bounded, so the minimum moves to eta -> 0
    auto cover = CoveringSpec::custom(1.0, [](double e) { return e >= 1.0 ? 0.0 : 50.0 * (1.0 - e); });
    const double oracle = oracle::dense_eta_dudley([&](double e) { return cover.log_cover(e); }, 1.0, 3.0, 4000);
    CHECK(entropy_integral_bound(cover, 3) == doctest::Approx(oracle).epsilon(1e-6));
  }

  TEST_CASE("entropy integral quadrature against Gauss-Kronrod") {
    const auto cover = CoveringSpec::unit_ball(3);
    auto h = [&](double e) { return std::sqrt(cover.log_cover(e)); };
    CHECK(entropy_integral(cover, 1e-8, 1.0) == doctest::Approx(oracle::log_space_integral(h, 1e-8, 1.0)).epsilon(1e-6));
    CHECK(entropy_integral(cover, 0.1, 5.0) == doctest::Approx(oracle::log_space_integral(h, 0.1, 2.0)).epsilon(1e-6));
  }

  TEST_CASE("product cover") {
    const auto p = CoveringSpec::product(CoveringSpec::unit_ball(2), CoveringSpec::ball(1, 3.0));
    CHECK(p.diameter() == doctest::Approx(std::hypot(2.0, 6.0)));
    const double e = 0.7;
    CHECK(p.log_cover(e) == doctest::Approx(unit_ball_log_cover(e / std::sqrt(2.0), 2) +
                                            CoveringSpec::ball(1, 3.0).log_cover(e / std::sqrt(2.0))));
  }

  TEST_CASE("c_nm") {
    CHECK(c_nm(2.0, 5.0, 1, 0.3) == doctest::Approx(2 * std::sqrt(5.0) * 0.3).epsilon(1e-15));
    for (int m : {1, 3, 100}) CHECK(c_nm(4.0, 4.0, m, 0.5) == doctest::Approx(2 * 2.0 * 0.5).epsilon(1e-15));
    CHECK_THROWS(c_nm(5.0, 4.0, 2, 1.0));
    Rng r(11);
    for (int rep = 0; rep < 100; ++rep) {
      const double full = 0.1 + 10 * r.uniform();
      const double inner = full * r.uniform();
      double prev = kInf;
      for (int m : {1, 2, 4, 8, 16}) {
        const double v = c_nm(inner, full, m, 1.0);
        CHECK(v <= prev);
        prev = v;
      }
    }
  }

  TEST_CASE("gaussian norm moments") {
    CHECK(gaussian_norm_moment(4, 0.0) == doctest::Approx(1.0));
    for (int d : {1, 3, 7}) CHECK(gaussian_norm_moment(d, 2.0) == doctest::Approx(d).epsilon(1e-13));
    CHECK(gaussian_norm_moment(1, 1.0) == doctest::Approx(std::sqrt(2 / M_PI)).epsilon(1e-14));
    Rng r(8);
    double s = 0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) s += std::abs(r.normal());
    CHECK(s / n == doctest::Approx(std::sqrt(2 / M_PI)).epsilon(3e-3));
    // L = ||y|| in d = 3
    const double inner = std::pow(gaussian_norm_moment(3, 1.0), 2);
    const double full = gaussian_norm_moment(3, 2.0);
    CHECK(inner == doctest::Approx(8 / M_PI).epsilon(1e-13));
    CHECK(inner < full);
    CHECK(c_nm(inner, full, 2, 1.0) < c_nm(inner, full, 1, 1.0));
  }

  TEST_CASE("finite-dimensional C tilde scales with the entropy integral") {
    const auto cover = CoveringSpec::unit_ball(2);
    const double v = finite_dim_c_tilde(1.0, 1.0, 1, cover, 100);
    const double integral = oracle::log_space_integral([&](double e) { return std::sqrt(cover.log_cover(e)); },
                                                       1e-300 * 2.0, 1.0);
    CHECK(v == doctest::Approx(16 * std::sqrt(2.0) / 10 * integral).epsilon(1e-6));
  }

  TEST_CASE("rademacher: trivial families") {
    RademacherOptions o;
    o.exhaustive = true;
    CHECK(empirical_rademacher({{1.0, 2.0, 3.0}}, o).value == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(empirical_rademacher({{1.0}, {-1.0}}, o).value == doctest::Approx(1.0));
  }

  TEST_CASE("rademacher: monte carlo within 3 SE of exhaustive, parallel equals serial") {
    Rng r(2);
    std::vector<std::vector<double>> table(5, std::vector<double>(10));
    for (auto& f : table)
      for (auto& v : f) v = r.normal();
    RademacherOptions ex;
    ex.exhaustive = true;
    const double exact = empirical_rademacher(table, ex).value;
    CHECK(exact == doctest::Approx(oracle::rademacher_exhaustive(table)).epsilon(1e-13));
    RademacherOptions mc;
    mc.draws = 100000;
    mc.seed = 4;
    const auto est = empirical_rademacher(table, mc);
    CHECK(std::abs(est.value - exact) <= 3 * est.std_error);
    mc.workers = 3;
    const auto par = empirical_rademacher(table, mc);
    const auto ser = empirical_rademacher_serial(table, mc);
    CHECK(par.value == ser.value);
    CHECK(par.std_error == ser.std_error);
  }
}
