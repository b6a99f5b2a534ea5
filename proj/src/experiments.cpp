#include "concentra/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "concentra/parallel.hpp"

namespace concentra::experiments {

using nlohmann::json;

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::logic_error("csv: row width does not match header");
  rows_.push_back(std::move(row));
}

std::string CsvWriter::quote(const std::string& f) {
  if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string CsvWriter::num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvWriter::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += quote(r[i]);
    }
    out += "\r\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

std::vector<double> auto_threshold_grid(const std::function<double(double)>& bound_of_t, double hi,
                                        double lo, int points) {
  std::vector<double> out;
  if (points < 1) return out;
  for (int i = 0; i < points; ++i) {
    const double target = points == 1 ? hi : hi * std::pow(lo / hi, static_cast<double>(i) / (points - 1));
    double a = 0.0, b = 1.0;
    int grow = 0;
    while (bound_of_t(b) > target && grow < 200) {
      a = b;
      b *= 2.0;
      ++grow;
    }
    if (bound_of_t(b) > target) return {};  // the bound never gets this small
    for (int it = 0; it < 200 && b - a > 1e-14 * b; ++it) {
      const double mid = 0.5 * (a + b);
      if (bound_of_t(mid) > target) a = mid;
      else b = mid;
    }
    out.push_back(b);
  }
  return out;
}

bool Outcome::any_violation() const {
  for (const auto& c : certificates)
    if (c.report.verdict == mc::Verdict::violated) return true;
  for (const auto& m : means)
    if (!m.pass) return true;
  return false;
}

bool Outcome::all_certified() const {
  for (const auto& c : certificates)
    if (c.report.verdict != mc::Verdict::certified) return false;
  for (const auto& m : means)
    if (!m.pass) return false;
  return true;
}

json to_json(const mc::McReport& r) {
  return json{{"trials", r.trials},       {"successes", r.successes}, {"p_hat", r.p_hat},
              {"upper_cl", r.upper_cl},   {"lower_cl", r.lower_cl},   {"bound", r.bound},
              {"confidence", r.confidence}, {"verdict", mc::to_string(r.verdict)}};
}

json to_json(const dsm::DsmConstantLedger& l) {
  return json{{"A_theta", l.A_theta}, {"B_theta", l.B_theta}, {"C_theta", l.C_theta},
              {"D_theta", l.D_theta}, {"A_X", l.A_X},         {"B_X", l.B_X},
              {"A_Y", l.A_Y},         {"B_Y", l.B_Y},         {"sigma_Y", l.sigma_Y},
              {"K_Y", l.K_Y},         {"A_XYm", l.A_XYm},     {"q", l.q},
              {"m", l.m},             {"h_y_psi1_norm", l.h_y_psi1_norm}};
}

namespace {

json certificates_json(const std::vector<CertificateRow>& rows) {
  json arr = json::array();
  for (const auto& c : rows) {
    json j = to_json(c.report);
    j["label"] = c.label;
    j["t"] = c.t;
    j["threshold"] = c.threshold;
    arr.push_back(j);
  }
  return arr;
}

json means_json(const std::vector<MeanCheck>& rows) {
  json arr = json::array();
  for (const auto& m : rows)
    arr.push_back(json{{"label", m.label}, {"mean", m.mean}, {"std_error", m.std_error},
                       {"limit", m.limit}, {"slack_se", m.slack_se}, {"pass", m.pass}});
  return arr;
}

MeanCheck mean_check(std::string label, const std::vector<double>& v, double limit, double slack) {
  const auto s = mc::summarize_mean(v);
  MeanCheck c;
  c.label = std::move(label);
  c.mean = s.mean;
  c.std_error = s.std_error;
  c.limit = limit;
  c.slack_se = slack;
  c.pass = s.mean <= limit + slack * s.std_error;
  return c;
}

void finish(Outcome& out) {
  out.summary["certificates"] = certificates_json(out.certificates);
  out.summary["mean_checks"] = means_json(out.means);
  out.summary["any_violation"] = out.any_violation();
}

std::vector<ulln::ToyTrial> toy_trials(const ToyExperimentConfig& cfg, const ulln::ReuseToy& toy,
                                       const ulln::StochOptProblem& problem) {
  if (cfg.trials == 0) throw std::invalid_argument("trials must be >= 1");
  const auto pop = toy.population_means();
  return run_trials<ulln::ToyTrial>(cfg.trials, cfg.workers, [&](std::size_t i) {
    return ulln::run_toy_trial(toy, problem, pop, cfg.seed, i);
  });
}

json toy_json(const ToyExperimentConfig& cfg, const ulln::ReuseToy& toy, double c) {
  return json{{"n", cfg.n},
              {"m", cfg.m},
              {"trials", cfg.trials},
              {"seed", cfg.seed},
              {"noise", cfg.toy.noise == ulln::ToyNoise::pareto ? "pareto" : "gaussian"},
              {"radius", cfg.toy.radius},
              {"grid_points", cfg.toy.grid_points},
              {"r0", toy.r0()},
              {"moment_inner", toy.moment_inner()},
              {"moment_full", toy.moment_full()},
              {"dudley", toy.dudley(cfg.n)},
              {"C_nm", c}};
}

}  // namespace

Outcome run_ulln_certify(const ToyExperimentConfig& cfg) {
  const ulln::ReuseToy toy(cfg.toy);
  const auto problem = toy.problem(cfg.n, cfg.m);
  const double C = toy.c_nm(cfg.n, cfg.m);
  const auto trials = toy_trials(cfg, toy, problem);

  std::vector<double> plus, minus;
  for (const auto& t : trials) {
    plus.push_back(t.phi_plus);
    minus.push_back(t.phi_minus);
  }
  const auto sp = mc::summarize_mean(plus);
  const auto sm = mc::summarize_mean(minus);
  auto bound = [&](double t) { return ulln::ulln_tail(problem, t, C).bound; };
  auto grid = cfg.t_grid.empty() ? auto_threshold_grid(bound) : cfg.t_grid;

  Outcome out;
  CsvWriter csv({"trial", "t", "event", "statistic", "threshold", "bound", "exceeded"});
  struct Ev {
    const char* name;
    const std::vector<double>* stat;
    double centre;
  };
  const Ev events[] = {{"phi_plus_centered", &plus, sp.mean}, {"phi_minus_centered", &minus, sm.mean},
                       {"phi_plus_shifted", &plus, C},        {"phi_minus_shifted", &minus, C}};
  for (double t : grid) {
    const auto tail = ulln::ulln_tail(problem, t, C);
    for (const auto& ev : events) {
      const double thr = t + ev.centre;
      CertificateRow row;
      row.label = ev.name;
      row.t = t;
      row.threshold = thr;
      row.bound = tail.bound;
      row.report = mc::certify_exceedances(*ev.stat, thr, tail.bound, cfg.confidence);
      out.certificates.push_back(row);
    }
  }
  for (std::size_t i = 0; i < trials.size(); ++i)
    for (double t : grid) {
      const double b = ulln::ulln_tail(problem, t, C).bound;
      for (const auto& ev : events) {
        const double s = (*ev.stat)[i];
        const double thr = t + ev.centre;
        csv.add({std::to_string(i), CsvWriter::num(t), ev.name, CsvWriter::num(s), CsvWriter::num(thr),
                 CsvWriter::num(b), s >= thr ? "1" : "0"});
      }
    }
  out.means.push_back(mean_check("mean_phi_plus", plus, C, 3.0));
  out.means.push_back(mean_check("mean_phi_minus", minus, C, 3.0));
  out.summary = toy_json(cfg, toy, C);
  out.summary["command"] = "ulln certify";
  out.summary["t_grid"] = grid;
  finish(out);
  out.csv = csv.str();
  return out;
}

Outcome run_opt_certify(const ToyExperimentConfig& cfg) {
  const ulln::ReuseToy toy(cfg.toy);
  const auto problem = toy.problem(cfg.n, cfg.m);
  const double C = toy.c_nm(cfg.n, cfg.m);
  const double eps_opt = problem.eps_opt;
  const auto trials = toy_trials(cfg, toy, problem);
  std::vector<double> excess;
  for (const auto& t : trials) excess.push_back(t.excess);

  auto bound = [&](double t) { return ulln::opt_tail(problem, t, C).bound; };
  auto grid = cfg.t_grid.empty() ? auto_threshold_grid(bound) : cfg.t_grid;
  Outcome out;
  CsvWriter csv({"trial", "t", "excess", "achieved_eps_opt", "threshold", "bound", "exceeded"});
  for (double t : grid) {
    const auto tail = ulln::opt_tail(problem, t, C);
    CertificateRow row;
    row.label = "excess";
    row.t = t;
    row.threshold = t + 2.0 * C + eps_opt;
    row.bound = tail.bound;
    row.report = mc::certify_exceedances(excess, row.threshold, tail.bound, cfg.confidence);
    out.certificates.push_back(row);
  }
  for (std::size_t i = 0; i < trials.size(); ++i)
    for (const auto& row : out.certificates)
      csv.add({std::to_string(i), CsvWriter::num(row.t), CsvWriter::num(excess[i]),
               CsvWriter::num(trials[i].achieved_eps_opt), CsvWriter::num(row.threshold),
               CsvWriter::num(row.bound), excess[i] >= row.threshold ? "1" : "0"});
  std::vector<double> abs_excess;
  for (double e : excess) abs_excess.push_back(std::abs(e));
  out.means.push_back(mean_check("l1_excess", abs_excess, ulln::opt_l1_bound(C, eps_opt), 3.0));
  out.summary = toy_json(cfg, toy, C);
  out.summary["command"] = "opt certify";
  out.summary["eps_opt"] = eps_opt;
  out.summary["l1_bound"] = ulln::opt_l1_bound(C, eps_opt);
  out.summary["t_grid"] = grid;
  finish(out);
  out.csv = csv.str();
  return out;
}

DsmSetup prepare_dsm(const DsmExperimentConfig& cfg) {
  cfg.data.validate();
  DsmSetup s;
  s.rs = dsm::resolve(cfg.schedule);
  s.bounds = dsm::ModelBounds::linear_family(cfg.radius, s.rs.size());
  dsm::SigmaYOptions opts;
  opts.samples = cfg.sigma_y_samples;
  opts.seed = cfg.seed;
  s.ledger = dsm::dsm_constants(cfg.schedule, s.bounds, cfg.data.r0, cfg.data.dim, cfg.m, opts);
  s.c = dsm::c_dsm(s.ledger, s.rs.size(), cfg.n, cfg.m, cfg.radius);
  s.optimum = dsm::population_optimum(cfg.data, s.rs, cfg.radius);
  s.r_star = dsm::score_matching_error(s.optimum.model, cfg.data, s.rs);
  return s;
}

DsmTrial run_dsm_trial(const DsmExperimentConfig& cfg, const DsmSetup& setup, std::uint64_t trial) {
  const Sampler px(cfg.data.sampler_spec());
  const Sampler py(SamplerSpec::gaussian(cfg.data.dim));
  const auto batch = ulln::draw_batch(px, py, cfg.n, cfg.m, cfg.seed, trial);
  const int d = cfg.data.dim;
  std::vector<dsm::Vec> x(cfg.n), y(static_cast<std::size_t>(cfg.n) * cfg.m);
  for (int i = 0; i < cfg.n; ++i) {
    x[i] = Eigen::Map<const dsm::Vec>(batch.x_at(i).data(), d);
    for (int k = 0; k < cfg.m; ++k) y[static_cast<std::size_t>(i) * cfg.m + k] = Eigen::Map<const dsm::Vec>(batch.y_at(i, k).data(), d);
  }
  const auto fit = dsm::train_empirical_dsm(x, y, cfg.m, setup.rs, cfg.radius);
  DsmTrial t;
  // excess score-matching error = population objective gap (the two differ by a theta-free constant)
  t.excess = dsm::population_objective(fit.model, cfg.data, setup.rs) - setup.optimum.objective;
  t.eps_opt = fit.eps_opt;
  t.projected = fit.projected;
  t.rank_deficient = fit.rank_deficient;
  return t;
}

Outcome run_dsm(const DsmExperimentConfig& cfg) {
  if (cfg.trials == 0) throw std::invalid_argument("trials must be >= 1");
  const auto setup = prepare_dsm(cfg);
  const auto trials = run_trials<DsmTrial>(cfg.trials, cfg.workers, [&](std::size_t i) {
    return run_dsm_trial(cfg, setup, i);
  });
  const double C = setup.c.value;
  auto bound = [&](double eps) { return dsm::dsm_bound(eps, cfg.n, cfg.m, setup.ledger, setup.r_star, C).tail.bound; };
  auto grid = cfg.eps_grid.empty() ? auto_threshold_grid(bound) : cfg.eps_grid;

  Outcome out;
  CsvWriter csv({"trial", "epsilon", "excess_error", "threshold", "bound", "exceeded"});
  std::vector<double> excess;
  for (const auto& t : trials) excess.push_back(t.excess);
  for (double eps : grid) {
    // per-trial eps_opt enters the threshold, so count events directly
    const auto rep = dsm::dsm_bound(eps, cfg.n, cfg.m, setup.ledger, setup.r_star, C);
    std::size_t hits = 0;
    for (const auto& t : trials)
      if (t.excess + setup.r_star >= rep.threshold + t.eps_opt) ++hits;
    CertificateRow row;
    row.label = "score_matching_error";
    row.t = eps;
    row.threshold = rep.threshold;
    row.bound = rep.tail.bound;
    row.report = mc::certify_counts(hits, trials.size(), rep.tail.bound, cfg.confidence);
    out.certificates.push_back(row);
  }
  for (std::size_t i = 0; i < trials.size(); ++i)
    for (const auto& row : out.certificates) {
      const double thr = row.threshold + trials[i].eps_opt - setup.r_star;
      csv.add({std::to_string(i), CsvWriter::num(row.t), CsvWriter::num(trials[i].excess), CsvWriter::num(thr),
               CsvWriter::num(row.bound), trials[i].excess >= thr ? "1" : "0"});
    }
  std::size_t projected = 0, deficient = 0;
  for (const auto& t : trials) {
    projected += t.projected;
    deficient += t.rank_deficient;
  }
  const auto mean = mc::summarize_mean(excess);
  json s;
  s["command"] = "dsm run";
  s["n"] = cfg.n;
  s["m"] = cfg.m;
  s["trials"] = cfg.trials;
  s["seed"] = cfg.seed;
  s["ledger"] = to_json(setup.ledger);
  s["C_dsm"] = C;
  s["C_dsm_detail"] = json{{"moment_inner", setup.c.moment_inner}, {"moment_full", setup.c.moment_full},
                           {"dudley", setup.c.dudley}, {"param_count", setup.c.param_count}};
  s["R_star"] = setup.r_star;
  s["population_optimum_interior"] = setup.optimum.interior;
  s["population_optimum_norm"] = setup.optimum.model.norm();
  s["mean_excess"] = mean.mean;
  s["mean_excess_se"] = mean.std_error;
  s["projected_trials"] = projected;
  s["rank_deficient_trials"] = deficient;
  s["eps_grid"] = grid;
  const auto sig = dsm::certify_sigma_y(setup.ledger, cfg.sigma_y_samples, cfg.seed);
  s["sigma_y_certificate"] = sig.pass();
  if (cfg.envelope_tuples > 0) {
    const auto audit = dsm::audit_dsm_envelopes(cfg.schedule, setup.ledger, setup.bounds, cfg.data.r0,
                                                cfg.data.dim, cfg.radius, cfg.envelope_tuples, cfg.seed);
    s["envelope_audit"] = json{{"tuples", audit.tuples}, {"violations", audit.violations()}};
    MeanCheck env;
    env.label = "envelope_violations";
    env.mean = static_cast<double>(audit.violations());
    env.limit = 0.0;
    env.slack_se = 0.0;
    env.pass = audit.violations() == 0;
    out.means.push_back(env);
  }
  MeanCheck sigc;
  sigc.label = "sigma_y_mgf_envelope";
  sigc.pass = sig.pass();
  sigc.slack_se = 3.0;
  out.means.push_back(sigc);
  out.summary = s;
  finish(out);
  out.csv = csv.str();
  return out;
}

Outcome run_gan(const GanExperimentConfig& cfg) {
  if (cfg.trials == 0) throw std::invalid_argument("trials must be >= 1");
  const gan::GanProblem problem(cfg.problem);
  const double C = gan::gan_c_nm(problem, cfg.n, cfg.m);
  const double eps_opt = 0.0;  // exact minimization over the generator grid
  const auto trials = run_trials<gan::GanTrial>(cfg.trials, cfg.workers, [&](std::size_t i) {
    return problem.run_trial(cfg.n, cfg.m, cfg.seed, i);
  });
  std::vector<double> excess;
  for (const auto& t : trials) excess.push_back(t.excess);
  auto bound = [&](double t) { return gan::gan_tail(problem, cfg.n, cfg.m, t, C).bound; };
  auto grid = cfg.t_grid.empty() ? auto_threshold_grid(bound) : cfg.t_grid;

  Outcome out;
  for (double t : grid) {
    const auto tail = gan::gan_tail(problem, cfg.n, cfg.m, t, C);
    CertificateRow row;
    row.label = "excess_ipm";
    row.t = t;
    row.threshold = t + 2.0 * C + eps_opt;
    row.bound = tail.bound;
    row.report = mc::certify_exceedances(excess, row.threshold, tail.bound, cfg.confidence);
    out.certificates.push_back(row);
  }
  CsvWriter csv({"trial", "t", "excess_ipm", "threshold", "bound", "exceeded"});
  for (std::size_t i = 0; i < trials.size(); ++i)
    for (const auto& row : out.certificates)
      csv.add({std::to_string(i), CsvWriter::num(row.t), CsvWriter::num(excess[i]), CsvWriter::num(row.threshold),
               CsvWriter::num(row.bound), excess[i] >= row.threshold ? "1" : "0"});
  std::vector<double> abs_excess;
  for (double e : excess) abs_excess.push_back(std::abs(e));
  out.means.push_back(mean_check("l1_excess_ipm", abs_excess, gan::gan_l1_bound(C, eps_opt), 3.0));
  json s;
  s["command"] = "gan run";
  s["n"] = cfg.n;
  s["m"] = cfg.m;
  s["trials"] = cfg.trials;
  s["seed"] = cfg.seed;
  s["C_gan"] = C;
  s["C_X"] = problem.c_x();
  s["C_Y"] = problem.has_y_orlicz() ? json(problem.c_y()) : json("none (heavy-tailed noise)");
  s["moment_inner"] = problem.moment_inner();
  s["moment_full"] = problem.moment_full();
  s["grid_size"] = problem.grid().size();
  s["population_inf_ipm"] = problem.population_inf();
  s["eps_opt"] = eps_opt;
  s["l1_bound"] = gan::gan_l1_bound(C, eps_opt);
  s["t_grid"] = grid;
  out.summary = s;
  finish(out);
  out.csv = csv.str();
  return out;
}

}  // namespace concentra::experiments
