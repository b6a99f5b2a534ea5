#include <doctest.h>

#include <cmath>
#include <vector>

#include "concentra/mc.hpp"
#include "concentra/parallel.hpp"
#include "concentra/rng.hpp"
#include "concentra/samplers.hpp"
#include "oracles.hpp"

using namespace concentra;

TEST_SUITE("mc") {
  TEST_CASE("clopper-pearson limits") {
    for (std::size_t n : {10u, 1000u, 10000u})
      CHECK(mc::binomial_upper_cl(0, n, 0.99) == doctest::Approx(1 - std::pow(0.01, 1.0 / n)).epsilon(1e-12));
    CHECK(mc::binomial_upper_cl(50, 50, 0.99) == 1.0);
    CHECK(mc::binomial_lower_cl(0, 50, 0.99) == 0.0);
    for (std::size_t k : {1u, 7u, 300u})
      CHECK(mc::binomial_upper_cl(k, 1000, 0.99) == doctest::Approx(oracle::cp_upper(k, 1000, 0.99)).epsilon(1e-9));
  }

  TEST_CASE("upper limit covers p = 0.3 in at least 99% of replications") {
    std::size_t covered = 0;
    const int reps = 1000, n = 1000;
    for (int r = 0; r < reps; ++r) {
      Rng rng(77, streams::kGeneric, r);
      std::size_t k = 0;
      for (int i = 0; i < n; ++i) k += rng.uniform() < 0.3;
      covered += mc::binomial_upper_cl(k, n, 0.99) >= 0.3;
    }
    CHECK(covered >= 990u);
  }

  TEST_CASE("verdicts") {
    CHECK(mc::certify_counts(0, 1000, 0.01).verdict == mc::Verdict::certified);
    CHECK(mc::certify_counts(0, 1000, 0.01).upper_cl == doctest::Approx(0.0046).epsilon(0.01));
    CHECK(mc::certify_counts(100, 1000, 0.01).verdict == mc::Verdict::violated);
    CHECK(mc::certify_counts(5, 1000, 0.01).verdict == mc::Verdict::inconclusive);
    // vacuous bounds are never a green check
    CHECK(mc::certify_counts(0, 1000, 1.0).verdict == mc::Verdict::inconclusive);
    CHECK(mc::certify_counts(0, 1000, 0.95).verdict == mc::Verdict::inconclusive);
  }

  TEST_CASE("enlarging the bound never flips certified to violated") {
    for (std::size_t k : {0u, 3u, 20u, 80u}) {
      bool seen_certified = false;
      for (double b = 1e-3; b < 0.9; b *= 1.3) {
        const auto v = mc::certify_counts(k, 1000, b).verdict;
        if (seen_certified) CHECK(v != mc::Verdict::violated);
        seen_certified = seen_certified || v == mc::Verdict::certified;
      }
    }
  }

  TEST_CASE("halved gaussian-mean bound is caught") {
    // mean of 10 N(0,1): the Chernoff bound holds, half the exact tail does not
    const double t = 0.5;
    const double chernoff = std::exp(-10 * t * t / 2);
    const double exact = 0.5 * std::erfc(t * std::sqrt(10.0) / std::sqrt(2.0));
    auto event = [&](std::size_t, Rng& r) {
      double s = 0;
      for (int i = 0; i < 10; ++i) s += r.normal();
      return s / 10 >= t;
    };
    CHECK(mc::certify(event, chernoff, 20000, 3).verdict == mc::Verdict::certified);
    CHECK(mc::certify(event, exact / 2, 20000, 3).verdict == mc::Verdict::violated);
    CHECK(mc::certify(event, chernoff, 20000, 3, 0.99, 1).successes ==
          mc::certify(event, chernoff, 20000, 3, 0.99, 4).successes);
  }

  TEST_CASE("parallel trials equal the serial reference") {
    auto fn = [](std::size_t i) {
      Rng r(5, streams::kGeneric, i);
      return r.normal() + r.uniform();
    };
    const auto a = run_trials_serial<double>(2000, fn);
    const auto b = run_trials<double>(2000, 4, fn);
    const auto c = run_trials<double>(2000, 1, fn);
    CHECK(a == b);
    CHECK(a == c);
  }

  TEST_CASE("trial exceptions propagate") {
    CHECK_THROWS_AS(run_trials<int>(100, 2,
                                    [](std::size_t i) -> int {
                                      if (i == 37) throw std::runtime_error("boom");
                                      return 0;
                                    }),
                    std::runtime_error);
  }
}

TEST_SUITE("samplers") {
  TEST_CASE("pareto(3) sample variance approaches shape/((shape-1)^2 (shape-2))") {
    const Sampler p(SamplerSpec::pareto(3.0));
    const auto xs = p.stream(1, streams::kSampleY, 0, 2000000);
    double s = 0, s2 = 0;
    for (double x : xs) {
      s += x;
      s2 += x * x;
    }
    const double n = static_cast<double>(xs.size());
    CHECK(s / n == doctest::Approx(1.5).epsilon(0.01));
    CHECK(s2 / n - (s / n) * (s / n) == doctest::Approx(0.75).epsilon(0.1));
  }

  TEST_CASE("gaussian mean and mixture weights") {
    const Sampler g(SamplerSpec::gaussian(1));
    const auto xs = g.stream(2, streams::kSampleY, 0, 200000);
    double s = 0;
    for (double x : xs) s += x;
    CHECK(std::abs(s / xs.size()) < 0.01);

    const Sampler m(SamplerSpec::mixture({{-1.0}, {0.0}, {2.0}}, {0.2, 0.5, 0.3}));
    Rng r(4);
    std::vector<double> counts(3, 0.0);
    const int n = 200000;
    for (int i = 0; i < n; ++i) counts[m.draw_atom(r)] += 1.0;
    CHECK(counts[0] / n == doctest::Approx(0.2).epsilon(0.02));
    CHECK(counts[1] / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(counts[2] / n == doctest::Approx(0.3).epsilon(0.02));
  }

  TEST_CASE("truncated gaussian stays inside the box, streams are reproducible") {
    const Sampler t(SamplerSpec::truncated_gaussian(2, 0.5));
    const auto a = t.stream(9, streams::kSampleX, 3, 5000);
    for (double v : a) CHECK(std::abs(v) <= 0.5);
    CHECK(a == t.stream(9, streams::kSampleX, 3, 5000));
    CHECK(a != t.stream(9, streams::kSampleX, 4, 5000));
  }

  TEST_CASE("exponential mean") {
    const Sampler e(SamplerSpec::exponential(2.0));
    const auto xs = e.stream(3, 0, 0, 200000);
    double s = 0;
    for (double x : xs) s += x;
    CHECK(s / xs.size() == doctest::Approx(0.5).epsilon(0.01));
  }
}
