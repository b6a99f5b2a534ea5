#include <doctest.h>

#include <cmath>
#include <vector>

#include "concentra/dsm.hpp"
#include "concentra/rng.hpp"

using namespace concentra;
using namespace concentra::dsm;

namespace {

NoiseSchedule schedule(double c, double sigma, std::vector<double> times) {
  NoiseSchedule s;
  s.c = c;
  s.sigma.value = sigma;
  s.times = times;
  s.gammas.assign(times.size(), 1.0 / times.size());
  return s;
}

CompactMixtureData two_atoms(double w = 0.4) {
  CompactMixtureData d;
  d.dim = 1;
  d.atoms = {Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)};
  d.weights = {w, 1 - w};
  d.r0 = 1.0;
  return d;
}

double log_density(const CompactMixtureData& d, double decay, double st, const Vec& z) {
  double p = 0.0;
  for (std::size_t k = 0; k < d.atoms.size(); ++k)
    p += d.weights[k] * std::exp(-(z - decay * d.atoms[k]).squaredNorm() / (2 * st * st));
  return std::log(p);
}

LinearScoreModel random_model(Rng& r, int d, int J, double scale) {
  Vec th(J * (d * d + d));
  for (int i = 0; i < th.size(); ++i) th[i] = scale * r.normal();
  return LinearScoreModel::from_stacked(d, J, th);
}

}  // namespace

TEST_SUITE("dsm") {
  TEST_CASE("tilde sigma closed forms") {
    for (double t : {0.1, 0.7, 2.0}) {
      CHECK(std::pow(tilde_sigma(schedule(0, 1, {t}), t), 2) == doctest::Approx(t).epsilon(1e-10));
      CHECK(std::pow(tilde_sigma(schedule(1, 1, {t}), t), 2) == doctest::Approx((1 - std::exp(-2 * t)) / 2).epsilon(1e-10));
      auto lin = schedule(0, 0, {t});
      lin.sigma.kind = SigmaSpec::Kind::linear;
      lin.sigma.slope = 1.0;
      CHECK(std::pow(tilde_sigma(lin, t), 2) == doctest::Approx(t * t * t / 3).epsilon(1e-10));
    }
  }

  TEST_CASE("per-sample objective") {
    const auto rs1 = resolve(schedule(0, 1, {1.0}));
    Vec y(2);
    y << 1, 0;
    CHECK(dsm_objective(LinearScoreModel::zero(2, 1), rs1, Vec::Zero(2), y) == doctest::Approx(1.0));

    const auto rs = resolve(schedule(1, std::sqrt(2.0), {0.2, 0.5, 1.0}));
    Rng r(1);
    for (int rep = 0; rep < 20; ++rep) {
      const int d = 1 + rep % 3;
      const auto model = random_model(r, d, 3, 1.0);
      Vec x0(d), yy(d);
      for (int a = 0; a < d; ++a) {
        x0[a] = r.normal();
        yy[a] = r.normal();
      }
      double expect = 0.0, zero_expect = 0.0;
      for (int j = 0; j < 3; ++j) {
        const double st = rs.sigma_tilde[j];
        const Vec z = rs.decay[j] * x0 + st * yy;
        const Vec s = model.A[j] * z + model.b[j];
        expect += rs.gamma[j] * (s.squaredNorm() + 2 / st * s.dot(yy) + yy.squaredNorm() / (st * st));
        zero_expect += rs.gamma[j] * yy.squaredNorm() / (st * st);
      }
      CHECK(dsm_objective(model, rs, x0, yy) == doctest::Approx(expect).epsilon(1e-12));
      CHECK(dsm_objective(LinearScoreModel::zero(d, 3), rs, x0, yy) == doctest::Approx(zero_expect).epsilon(1e-12));
    }
  }

  TEST_CASE("ledger with r0 = 0 and b = beta = 0") {
    auto sch = schedule(0, 1, {1.0});
    sch.gammas = {1.0};
    ModelBounds mb;
    mb.a = {0.7};
    mb.b = {0.0};
    mb.L = {1.0};
    mb.alpha = {1.3};
    mb.beta = {0.0};
    mb.q = 1.0;
    const auto l = assemble_ledger(sch, mb, 0.0, 1, 1, 1.0);
    CHECK(l.A_theta == doctest::Approx(2 * 0.7 * 1.3));
    CHECK(l.B_theta == doctest::Approx(2 * 1.3 / 1.0));
    CHECK(l.C_theta == 0.0);
    CHECK(l.D_theta == 0.0);
    CHECK(l.A_X == 0.0);
    CHECK(l.B_X == 0.0);
  }

  TEST_CASE("A_XYm across m and 2m") {
    const auto sch = schedule(1, std::sqrt(2.0), {0.2, 0.5, 1.0});
    const auto mb = ModelBounds::linear_family(4.0, 3);
    for (int m : {1, 3, 8}) {
      const auto l1 = assemble_ledger(sch, mb, 1.0, 1, m, 0.9);
      const auto l2 = assemble_ledger(sch, mb, 1.0, 1, 2 * m, 0.9);
      const double s = l1.A_Y + 4 * l1.B_Y;
      CHECK(l1.A_XYm - l2.A_XYm == doctest::Approx(2 * s * s * 0.81 / m).epsilon(1e-12));
    }
  }

  TEST_CASE("envelopes hold on sampled tuples") {
    const auto sch = schedule(1, std::sqrt(2.0), {0.2, 0.5, 1.0});
    const auto mb = ModelBounds::linear_family(4.0, 3);
    SigmaYOptions o;
    o.samples = 20000;
    for (int d : {1, 2}) {
      const auto l = dsm_constants(sch, mb, 1.0, d, 1, o);
      const auto audit = audit_dsm_envelopes(sch, l, mb, 1.0, d, 4.0, 20000, 5);
      CHECK(audit.violations() == 0u);
    }
  }

  TEST_CASE("sigma_Y quadratic dominates the h_Y mgf") {
    const auto sch = schedule(1, std::sqrt(2.0), {0.2, 0.5, 1.0});
    SigmaYOptions o;
    o.samples = 50000;
    const auto l = dsm_constants(sch, ModelBounds::linear_family(4.0, 3), 1.0, 1, 1, o);
    CHECK(l.K_Y == doctest::Approx(1 / (std::sqrt(3.0) * l.h_y_psi1_norm)).epsilon(1e-12));
    CHECK(certify_sigma_y(l, 50000, 99).pass());
  }

  TEST_CASE("true score") {
    CompactMixtureData one;
    one.atoms = {Vec::Zero(2)};
    one.weights = {1.0};
    one.dim = 2;
    one.r0 = 0.0;
    Vec z(2);
    z << 0.3, -1.2;
    CHECK((true_score(one, 0.6, 0.8, z) + z / 0.64).norm() < 1e-14);

    const auto d = two_atoms(0.5);
    CHECK(std::abs(true_score(d, 0.7, 0.5, Vec::Zero(1))[0]) < 1e-15);

    const auto d2 = two_atoms(0.3);
    for (double zz : {-2.0, -0.4, 0.0, 0.9, 3.0}) {
      const double h = 1e-5;
      const double fd = (log_density(d2, 0.6, 0.7, Vec::Constant(1, zz + h)) -
                         log_density(d2, 0.6, 0.7, Vec::Constant(1, zz - h))) / (2 * h);
      CHECK(true_score(d2, 0.6, 0.7, Vec::Constant(1, zz))[0] == doctest::Approx(fd).epsilon(1e-6));
    }
  }

  TEST_CASE("score matching error") {
    const auto sch = schedule(1, std::sqrt(2.0), {0.2, 0.5, 1.0});
    const auto rs = resolve(sch);
    CompactMixtureData one;
    one.atoms = {Vec::Constant(1, 0.0)};
    one.weights = {1.0};
    one.r0 = 0.0;
    double expect = 0.0;
    for (int j = 0; j < 3; ++j) expect += rs.gamma[j] / (rs.sigma_tilde[j] * rs.sigma_tilde[j]);
    CHECK(score_matching_error(LinearScoreModel::zero(1, 3), one, rs) == doctest::Approx(expect).epsilon(1e-8));

    // single atom: the true score is linear, so the population optimum reaches zero error
    CompactMixtureData at;
    at.atoms = {Vec::Constant(1, 0.8)};
    at.weights = {1.0};
    at.r0 = 0.8;
    const auto opt = population_optimum(at, rs, 100.0);
    CHECK(score_matching_error(opt.model, at, rs) < 1e-8);

    // quadrature against Monte Carlo
    const auto d = two_atoms();
    Rng r(3);
    const auto model = random_model(r, 1, 3, 0.5);
    const Sampler px(d.sampler_spec());
    double s = 0, s2 = 0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
      double x0v;
      px.draw(r, std::span<double>(&x0v, 1));
      double e = 0.0;
      for (int j = 0; j < 3; ++j) {
        const Vec z = Vec::Constant(1, rs.decay[j] * x0v + rs.sigma_tilde[j] * r.normal());
        e += rs.gamma[j] * (model.eval(j, z) - true_score(d, rs.decay[j], rs.sigma_tilde[j], z)).squaredNorm();
      }
      s += e;
      s2 += e * e;
    }
    const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
    CHECK(std::abs(score_matching_error(model, d, rs) - mean) <= 3 * se);
  }

  TEST_CASE("objective minus score-matching error does not depend on the model") {
    const auto rs = resolve(schedule(1, std::sqrt(2.0), {0.2, 0.5, 1.0}));
    const auto d = two_atoms();
    Rng r(4);
    const double ref = population_objective(LinearScoreModel::zero(1, 3), d, rs) -
                       score_matching_error(LinearScoreModel::zero(1, 3), d, rs);
    for (int rep = 0; rep < 10; ++rep) {
      const auto m = random_model(r, 1, 3, 1.0);
      CHECK(population_objective(m, d, rs) - score_matching_error(m, d, rs) == doctest::Approx(ref).epsilon(1e-6));
    }
  }

  TEST_CASE("training") {
    const auto rs = resolve(schedule(1, std::sqrt(2.0), {0.2, 0.5, 1.0}));
    // n = m = 1 interpolates
    const auto one = train_empirical_dsm({Vec::Constant(1, 0.5)}, {Vec::Constant(1, -0.3)}, 1, rs, 1e6);
    CHECK(one.objective < 1e-12);
    CHECK(one.rank_deficient);

    // huge m with a single atom: converges to the population optimum
    CompactMixtureData at;
    at.atoms = {Vec::Constant(1, 0.8)};
    at.weights = {1.0};
    at.r0 = 0.8;
    Rng r(6);
    std::vector<Vec> x, y;
    const int n = 4, m = 50000;
    for (int i = 0; i < n; ++i) x.push_back(Vec::Constant(1, 0.8));
    for (int i = 0; i < n * m; ++i) y.push_back(Vec::Constant(1, r.normal()));
    const auto fit = train_empirical_dsm(x, y, m, rs, 100.0);
    const auto opt = population_optimum(at, rs, 100.0);
    CHECK((fit.model.stacked() - opt.model.stacked()).norm() < 0.05 * opt.model.stacked().norm());

    // the fitted model beats random points of the ball
    const auto d = two_atoms();
    const Sampler px(d.sampler_spec());
    std::vector<Vec> xs, ys;
    for (int i = 0; i < 30; ++i) {
      double v;
      px.draw(r, std::span<double>(&v, 1));
      xs.push_back(Vec::Constant(1, v));
      for (int k = 0; k < 2; ++k) ys.push_back(Vec::Constant(1, r.normal()));
    }
    const auto f2 = train_empirical_dsm(xs, ys, 2, rs, 4.0);
    CHECK(f2.model.norm() <= 4.0 + 1e-9);
    for (int rep = 0; rep < 200; ++rep) {
      const auto th = random_in_ball(r, 6, 4.0);
      const auto mdl = LinearScoreModel::from_stacked(1, 3, th);
      CHECK(f2.objective <= empirical_objective(mdl, xs, ys, 2, rs) + f2.eps_opt + 1e-12);
    }
  }

  TEST_CASE("population optimum on the ball boundary") {
    const auto rs = resolve(schedule(1, std::sqrt(2.0), {0.2, 0.5, 1.0}));
    const auto d = two_atoms();
    const auto free = population_optimum(d, rs, 1e6);
    CHECK(free.interior);
    const double R = 0.5 * free.model.norm();
    const auto c = population_optimum(d, rs, R);
    CHECK_FALSE(c.interior);
    CHECK(c.model.norm() == doctest::Approx(R).epsilon(1e-8));
    Rng r(2);
    for (int rep = 0; rep < 200; ++rep) {
      const auto mdl = LinearScoreModel::from_stacked(1, 3, random_in_ball(r, 6, R));
      CHECK(c.objective <= population_objective(mdl, d, rs) + 1e-10);
    }
  }

  TEST_CASE("bound") {
    const auto sch = schedule(1, std::sqrt(2.0), {0.2, 0.5, 1.0});
    const auto mb = ModelBounds::linear_family(4.0, 3);
    const auto l1 = assemble_ledger(sch, mb, 1.0, 1, 1, 0.9);
    const auto l8 = assemble_ledger(sch, mb, 1.0, 1, 8, 0.9);
    CHECK(dsm_bound(0.0, 50, 1, l1, 0, 0).tail.bound == 1.0);
    const double eps = 2.0 * l1.K_Y * l1.A_XYm;
    CHECK(dsm_bound(eps, 50, 1, l1, 0, 0).tail.exponent_value ==
          doctest::Approx(50 * eps * eps / (16 * l1.A_XYm)).epsilon(1e-9));
    for (double e : {10.0, 100.0, 300.0})
      CHECK(dsm_bound(e, 50, 8, l8, 0, 0).tail.bound <= dsm_bound(e, 50, 1, l1, 0, 0).tail.bound);
    CHECK_THROWS(dsm_bound(1.0, 50, 2, l1, 0, 0));
    const auto rep = dsm_bound(3.0, 50, 1, l1, 0.2, 5.0, 0.1);
    CHECK(rep.threshold == doctest::Approx(3.0 + 0.2 + 10.0 + 0.1));
  }
}
