#include "concentra/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "concentra/complexity.hpp"
#include "concentra/mc.hpp"
#include "concentra/orlicz.hpp"
#include "concentra/rng.hpp"

namespace concentra::cli {

using nlohmann::json;

namespace {

std::string g10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double to_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError("bad number '" + s + "' in " + what);
  return v;
}

int line_of(const std::string& text, std::size_t pos) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + std::min(pos, text.size()), '\n'));
}

// walks one JSON object, tracking which keys were consumed
class Reader {
 public:
  Reader(const json& j, std::string path, const std::string& text) : j_(j), path_(std::move(path)), text_(text) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double number(const std::string& key, double def) {
    if (!take(key)) return def;
    return as_number(key, j_.at(key));
  }
  double number(const std::string& key) {
    require(key);
    return number(key, 0.0);
  }
  long long integer(const std::string& key, long long def) {
    if (!take(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<long long>();
  }
  long long positive(const std::string& key, long long def) {
    const auto v = integer(key, def);
    if (v < 1) fail(key, "must be >= 1");
    return v;
  }
  std::string str(const std::string& key, const std::string& def) {
    if (!take(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }
  std::vector<double> numbers(const std::string& key, std::vector<double> def) {
    if (!take(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(as_number(key, e));
    return out;
  }
  // array of points; bare numbers are read as 1-d points
  std::vector<std::vector<double>> points(const std::string& key) {
    require(key);
    take(key);
    const auto& v = j_.at(key);
    if (!v.is_array() || v.empty()) fail(key, "expected a nonempty array");
    std::vector<std::vector<double>> out;
    for (const auto& e : v) {
      if (e.is_number()) {
        out.push_back({e.get<double>()});
      } else if (e.is_array()) {
        std::vector<double> p;
        for (const auto& c : e) p.push_back(as_number(key, c));
        out.push_back(p);
      } else {
        fail(key, "expected numbers or arrays of numbers");
      }
    }
    return out;
  }
  Reader child(const std::string& key) {
    require(key);
    take(key);
    return Reader(j_.at(key), path_ + "/" + key, text_);
  }
  std::string choice(const std::string& key, const std::string& def, std::initializer_list<const char*> allowed) {
    const auto v = str(key, def);
    for (const char* a : allowed)
      if (v == a) return v;
    std::string msg = "must be one of";
    for (const char* a : allowed) msg += std::string(" '") + a + "'";
    fail(key, msg);
  }
  void require(const std::string& key) {
    if (!j_.contains(key)) fail(key, "missing required field");
  }
  void done() {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(it.key(), "unknown key");
  }
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    std::string where = path_ + (key.empty() ? "" : "/" + key);
    if (where.empty()) where = "/";
    std::string line;
    if (!text_.empty() && !key.empty()) {
      const auto pos = text_.find("\"" + key + "\"");
      if (pos != std::string::npos) line = "line " + std::to_string(line_of(text_, pos)) + ", ";
    }
    throw ConfigError(line + "field " + where + ": " + msg);
  }

 private:
  bool take(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  double as_number(const std::string& key, const json& v) const {
    if (!v.is_number()) fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "expected a finite number");
    return d;
  }

  const json& j_;
  std::string path_;
  const std::string& text_;
  std::set<std::string> seen_;
};

void read_globals(Reader& r, GlobalFields& g, const std::string& command) {
  const auto cmd = r.str("command", command);
  if (cmd != command) r.fail("command", "config is for '" + cmd + "', not '" + command + "'");
  g.seed = static_cast<std::uint64_t>(r.integer("seed", static_cast<long long>(g.seed)));
  g.trials = static_cast<std::size_t>(r.positive("trials", static_cast<long long>(g.trials)));
  g.output_path = r.str("output_path", g.output_path);
  g.confidence = r.number("confidence", g.confidence);
  if (!(g.confidence > 0.0 && g.confidence < 1.0)) r.fail("confidence", "must lie in (0, 1)");
}

std::vector<double> positive_grid(Reader& r, const std::string& key) {
  auto v = r.numbers(key, {});
  for (double x : v)
    if (!(x > 0.0)) r.fail(key, "entries must be > 0");
  return v;
}

}  // namespace

XiFunction parse_xi(const std::string& text) {
  const auto parts = split(text, ':');
  const auto& kind = parts[0];
  auto arg = [&](std::size_t i) {
    if (i >= parts.size()) throw ConfigError("xi '" + text + "' is missing a parameter");
    return to_number(parts[i], "xi '" + text + "'");
  };
  auto arity = [&](std::size_t n) {
    if (parts.size() != n + 1) throw ConfigError("xi '" + text + "' expects " + std::to_string(n) + " parameter(s)");
  };
  try {
    if (kind == "quadratic") {
      arity(1);
      return XiFunction::quadratic(arg(1));
    }
    if (kind == "bernstein") {
      arity(1);
      return XiFunction::bernstein(arg(1));
    }
    if (kind == "series") {
      arity(2);
      return XiFunction::series(arg(1), arg(2));
    }
    if (kind == "psi1" || kind == "psi2") {
      arity(1);
      return XiFunction::series(kind == "psi1" ? 1.0 : 2.0, arg(1));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("xi '" + text + "': " + e.what());
  }
  throw ConfigError("unknown xi kind '" + kind + "' (quadratic, bernstein, series, psi1, psi2)");
}

json parse_config_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
    const int line = line_of(text, byte);
    const auto bol = text.rfind('\n', byte == 0 ? 0 : byte - 1);
    const std::size_t col = bol == std::string::npos ? byte + 1 : byte - bol;
    std::string what = e.what();
    const auto cut = what.find("syntax error");
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON: " +
                      (cut == std::string::npos ? what : what.substr(cut)));
  }
}

json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

experiments::ToyExperimentConfig toy_config(const json& j, GlobalFields& g, const std::string& text) {
  Reader r(j, "", text);
  experiments::ToyExperimentConfig c;
  const bool opt = r.str("command", "ulln certify") == "opt certify";
  read_globals(r, g, opt ? "opt certify" : "ulln certify");
  c.n = static_cast<int>(r.positive("n", c.n));
  c.m = static_cast<int>(r.positive("m", c.m));
  c.t_grid = positive_grid(r, "t_grid");
  auto& t = c.toy;
  if (r.has("atoms")) {
    t.atoms.clear();
    for (const auto& p : r.points("atoms")) {
      if (p.size() != 1) r.fail("atoms", "the toy problem is one-dimensional");
      t.atoms.push_back(p[0]);
    }
  }
  t.weights = r.numbers("weights", t.weights);
  if (t.weights.size() != t.atoms.size()) r.fail("weights", "length must match atoms");
  t.radius = r.number("radius", t.radius);
  if (!(t.radius > 0.0)) r.fail("radius", "must be > 0");
  t.grid_points = static_cast<int>(r.positive("grid_points", t.grid_points));
  t.noise = r.choice("noise", "gaussian", {"gaussian", "pareto"}) == "pareto" ? ulln::ToyNoise::pareto
                                                                               : ulln::ToyNoise::gaussian;
  t.pareto_shape = r.number("pareto_shape", t.pareto_shape);
  if (!(t.pareto_shape > 2.0)) r.fail("pareto_shape", "must be > 2 (finite variance)");
  r.done();
  c.trials = g.trials;
  c.seed = g.seed;
  c.confidence = g.confidence;
  return c;
}

experiments::DsmExperimentConfig dsm_config(const json& j, GlobalFields& g, const std::string& text) {
  Reader r(j, "", text);
  experiments::DsmExperimentConfig c;
  read_globals(r, g, "dsm run");
  c.n = static_cast<int>(r.positive("n", c.n));
  c.m = static_cast<int>(r.positive("m", c.m));
  c.eps_grid = positive_grid(r, "eps_grid");
  c.radius = r.number("radius", c.radius);
  if (!(c.radius > 0.0)) r.fail("radius", "must be > 0");
  c.sigma_y_samples = static_cast<std::size_t>(r.positive("sigma_y_samples", static_cast<long long>(c.sigma_y_samples)));
  c.envelope_tuples = static_cast<std::size_t>(r.integer("envelope_tuples", 0));
  {
    auto d = r.child("data");
    auto pts = d.points("atoms");
    c.data.dim = static_cast<int>(d.positive("dim", static_cast<long long>(pts[0].size())));
    double rmax = 0.0;
    for (const auto& p : pts) {
      if (static_cast<int>(p.size()) != c.data.dim) d.fail("atoms", "every atom needs dim coordinates");
      dsm::Vec v = Eigen::Map<const dsm::Vec>(p.data(), c.data.dim);
      rmax = std::max(rmax, v.norm());
      c.data.atoms.push_back(v);
    }
    c.data.weights = d.numbers("weights", std::vector<double>(pts.size(), 1.0 / pts.size()));
    if (c.data.weights.size() != pts.size()) d.fail("weights", "length must match atoms");
    c.data.r0 = d.number("r0", rmax);
    d.done();
  }
  {
    auto s = r.child("schedule");
    c.schedule.c = s.number("c", c.schedule.c);
    c.schedule.times = s.numbers("times", {});
    if (c.schedule.times.empty()) s.fail("times", "need at least one timestep");
    c.schedule.gammas = s.numbers("gammas", std::vector<double>(c.schedule.times.size(), 1.0 / c.schedule.times.size()));
    if (c.schedule.gammas.size() != c.schedule.times.size()) s.fail("gammas", "length must match times");
    if (s.has("sigma")) {
      auto sg = s.child("sigma");
      const auto kind = sg.choice("kind", "constant", {"constant", "linear"});
      c.schedule.sigma.kind = kind == "linear" ? dsm::SigmaSpec::Kind::linear : dsm::SigmaSpec::Kind::constant;
      c.schedule.sigma.value = sg.number("value", c.schedule.sigma.value);
      c.schedule.sigma.slope = sg.number("slope", 0.0);
      sg.done();
    }
    s.done();
  }
  r.done();
  try {
    c.schedule.validate();
    c.data.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid dsm config: ") + e.what());
  }
  c.trials = g.trials;
  c.seed = g.seed;
  c.confidence = g.confidence;
  return c;
}

experiments::GanExperimentConfig gan_config(const json& j, GlobalFields& g, const std::string& text) {
  Reader r(j, "", text);
  experiments::GanExperimentConfig c;
  read_globals(r, g, "gan run");
  c.n = static_cast<int>(r.positive("n", c.n));
  c.m = static_cast<int>(r.positive("m", c.m));
  c.t_grid = positive_grid(r, "t_grid");
  auto& p = c.problem;
  auto pts = r.points("atoms");
  p.dim = static_cast<int>(r.positive("dim", static_cast<long long>(pts[0].size())));
  for (const auto& a : pts) {
    if (static_cast<int>(a.size()) != p.dim) r.fail("atoms", "every atom needs dim coordinates");
    p.atoms.push_back(Eigen::Map<const gan::Vec>(a.data(), p.dim));
  }
  p.weights = r.numbers("weights", std::vector<double>(pts.size(), 1.0 / pts.size()));
  if (p.weights.size() != pts.size()) r.fail("weights", "length must match atoms");
  p.noise = r.choice("noise", "gaussian", {"gaussian", "pareto"}) == "pareto" ? gan::NoiseKind::pareto
                                                                             : gan::NoiseKind::gaussian;
  p.pareto_shape = r.number("pareto_shape", p.pareto_shape);
  p.radius = r.number("radius", p.radius);
  if (!(p.radius > 0.0)) r.fail("radius", "must be > 0");
  p.grid_per_axis = static_cast<int>(r.positive("grid_per_axis", p.grid_per_axis));
  p.features = gan::FeatureMap::identity(p.dim);
  if (r.has("features")) {
    auto f = r.child("features");
    const auto kind = f.choice("kind", "identity", {"identity", "fourier"});
    if (kind == "fourier") {
      const int count = static_cast<int>(f.positive("count", 16));
      const double bw = f.number("bandwidth", 1.0);
      const auto fseed = static_cast<std::uint64_t>(f.integer("seed", static_cast<long long>(g.seed)));
      p.features = gan::FeatureMap::fourier(p.dim, count, bw, fseed);
    }
    f.done();
  }
  r.done();
  c.trials = g.trials;
  c.seed = g.seed;
  c.confidence = g.confidence;
  try {
    gan::GanProblem probe(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid gan config: ") + e.what());
  }
  return c;
}

namespace {

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << body;
}

std::string summary_path(const std::string& csv_path) {
  const auto dot = csv_path.rfind('.');
  const auto slash = csv_path.find_last_of('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? csv_path.substr(0, dot) : csv_path) + ".summary.json";
}

int report(const experiments::Outcome& o, const GlobalFields& g, std::ostream& out) {
  for (const auto& c : o.certificates)
    out << mc::to_string(c.report.verdict) << "  " << c.label << " t=" << g10(c.t) << " bound=" << g10(c.bound)
        << " p_hat=" << g10(c.report.p_hat) << " upper_cl=" << g10(c.report.upper_cl) << " ("
        << c.report.successes << "/" << c.report.trials << ")\n";
  for (const auto& m : o.means)
    out << (m.pass ? "pass" : "violated") << "  " << m.label << " mean=" << g10(m.mean) << " se=" << g10(m.std_error)
        << " limit=" << g10(m.limit) << "\n";
  if (o.certificates.empty()) out << "note: no threshold with a non-vacuous bound; tail certificates skipped\n";
  if (!g.output_path.empty()) {
    write_file(g.output_path, o.csv);
    write_file(summary_path(g.output_path), o.summary.dump(2) + "\n");
    out << "wrote " << g.output_path << " and " << summary_path(g.output_path) << "\n";
  }
  return o.any_violation() ? kViolation : kOk;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Check> selfcheck() {
  std::vector<Check> out;
  {
    double worst = 0.0;
    for (double a : {0.5, 1.0, 2.0})
      for (double t : {0.5, 1.0, 2.0}) {
        const double v = legendre_sup(XiFunction::quadratic(a), t).value;
        worst = std::max(worst, std::abs(v - t * t / (4 * a)) / (t * t / (4 * a)));
      }
    out.push_back({"legendre quadratic closed form", worst < 1e-9, "max rel err " + g10(worst)});
  }
  {
    std::vector<double> ones(1000, 1.0);
    const double n1 = orlicz::luxemburg_norm(ones, 1.0).norm;
    const double n2 = orlicz::luxemburg_norm(ones, 2.0).norm;
    const bool ok = std::abs(n1 - 1 / std::log(2.0)) < 1e-8 && std::abs(n2 - 1 / std::sqrt(std::log(2.0))) < 1e-8;
    out.push_back({"luxemburg norm of constants", ok, g10(n1) + " " + g10(n2)});
  }
  {
    const double u = mc::binomial_upper_cl(0, 1000, 0.99);
    const double want = 1 - std::pow(0.01, 1.0 / 1000);
    out.push_back({"zero-count clopper-pearson", std::abs(u - want) < 1e-12, g10(u)});
  }
  {
    bool ok = true;
    for (int k : {1, 4, 16})
      for (std::size_t n : {64u, 1024u, 65536u})
        ok = ok && complexity::entropy_integral_bound(complexity::CoveringSpec::unit_ball(k), n) <=
                       32 * std::sqrt(static_cast<double>(k) / n);
    out.push_back({"unit-ball entropy bound <= 32 sqrt(k/n)", ok, ""});
  }
  {
    double prev = kInf;
    bool ok = true;
    for (int m : {1, 2, 4, 8, 16}) {
      const double c = complexity::c_nm(1.0, 3.0, m, 0.1);
      ok = ok && c <= prev;
      prev = c;
    }
    out.push_back({"c_nm nonincreasing in m", ok, ""});
  }
  {
    double worst = 0.0;
    for (double q : {1.0, 2.0})
      for (double u : {0.1, 0.5, 0.9}) {
        const double a = psi_q_series_exponent(u, q);
        const double b = psi_q_series_exponent(u, q, true);
        worst = std::max(worst, std::abs(a - b) / a);
      }
    out.push_back({"series xi closed forms match term-by-term sums", worst <= 1e-12, "max rel err " + g10(worst)});
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"concentra: concentration bounds and Monte-Carlo certificates", "concentra"};
  app.require_subcommand(1);
  std::string action;

  std::string xi_spec;
  std::vector<std::string> xi_specs;
  std::vector<double> ts;
  double t = 0.0;
  double q = 2.0;
  std::string input, config_path, out_path, cover_spec;
  std::size_t normal_samples = 0, draws = 10000, n = 0;
  std::uint64_t seed = 1;
  bool exhaustive = false;

  auto* bound = app.add_subcommand("bound", "closed-form tail bounds");
  bound->require_subcommand(1);
  auto* leg = bound->add_subcommand("legendre", "sup over lambda of lambda t - xi(lambda)");
  leg->add_option("--xi", xi_spec, "quadratic:a | bernstein:u | series:q:norm | psi1:norm | psi2:norm")->required();
  leg->add_option("--t", t, "slope")->required();
  leg->callback([&] { action = "bound legendre"; });
  auto* mcd = bound->add_subcommand("mcdiarmid", "generalized bounded-differences tail");
  mcd->add_option("--xi", xi_specs, "one per coordinate (repeat)")->required();
  mcd->add_option("--t", ts, "deviation(s)")->required();
  mcd->callback([&] { action = "bound mcdiarmid"; });

  auto* orl = app.add_subcommand("orlicz", "Orlicz norms");
  orl->require_subcommand(1);
  auto* norm = orl->add_subcommand("norm", "plug-in Luxemburg norm");
  norm->add_option("--q", q, "exponent (1 or 2, any q >= 1)");
  auto* in_opt = norm->add_option("--input", input, "file of whitespace-separated samples");
  auto* gauss_opt = norm->add_option("--normal", normal_samples, "use this many standard normal samples");
  in_opt->excludes(gauss_opt);
  norm->add_option("--seed", seed);
  norm->callback([&] { action = "orlicz norm"; });

  auto* rad = app.add_subcommand("rademacher", "empirical Rademacher complexity of a finite family");
  rad->add_option("--input", input, "CSV/whitespace table: one row per function, one column per sample")->required();
  rad->add_option("--draws", draws);
  rad->add_flag("--exhaustive", exhaustive, "enumerate all 2^n sign vectors (n <= 20)");
  rad->add_option("--seed", seed);
  rad->callback([&] { action = "rademacher"; });

  auto* dud = app.add_subcommand("dudley", "entropy-integral bound");
  dud->add_option("--cover", cover_spec, "unit:k | ball:k:R")->required();
  dud->add_option("--n", n, "sample size")->required()->check(CLI::PositiveNumber);
  dud->callback([&] { action = "dudley"; });

  auto add_run = [&](CLI::App* parent, const char* name, const char* label, const char* help) {
    auto* s = parent->add_subcommand(name, help);
    s->add_option("--config", config_path, "JSON experiment config")->required();
    s->add_option("--out", out_path, "CSV output path (overrides output_path)");
    s->callback([&, label] { action = label; });
    return s;
  };
  auto* ulln_cmd = app.add_subcommand("ulln", "uniform law certificates");
  ulln_cmd->require_subcommand(1);
  add_run(ulln_cmd, "certify", "ulln certify", "certify the uniform deviation tail");
  auto* opt_cmd = app.add_subcommand("opt", "stochastic optimization certificates");
  opt_cmd->require_subcommand(1);
  add_run(opt_cmd, "certify", "opt certify", "certify the excess-risk tail and L1 bound");
  auto* dsm_cmd = app.add_subcommand("dsm", "denoising score matching");
  dsm_cmd->require_subcommand(1);
  add_run(dsm_cmd, "run", "dsm run", "train, bound and certify");
  auto* gan_cmd = app.add_subcommand("gan", "IPM generative model");
  gan_cmd->require_subcommand(1);
  add_run(gan_cmd, "run", "gan run", "train on a generator grid, bound and certify");
  app.add_subcommand("selfcheck", "quick closed-form checks")->callback([&] { action = "selfcheck"; });

  std::vector<const char*> argv{"concentra"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (action == "bound legendre") {
      const auto r = legendre_sup(parse_xi(xi_spec), t);
      out << "value " << g10(r.value) << " lambda* " << g10(r.lambda_star) << "\n";
      return kOk;
    }
    if (action == "bound mcdiarmid") {
      std::vector<XiFunction> xis;
      for (const auto& s : xi_specs) xis.push_back(parse_xi(s));
      for (double tt : ts) {
        const auto r = mcdiarmid_tail(xis, tt);
        out << "t " << g10(tt) << " bound " << g10(r.bound) << " lambda* " << g10(r.lambda_star) << " exponent "
            << g10(r.exponent_value) << "\n";
      }
      return kOk;
    }
    if (action == "orlicz norm") {
      std::vector<double> xs;
      if (!input.empty()) {
        std::stringstream ss(read_text(input));
        std::string tok;
        while (ss >> tok) xs.push_back(to_number(tok, input));
      } else if (normal_samples > 0) {
        Rng rng(seed, streams::kNormEstimate, 0);
        for (std::size_t i = 0; i < normal_samples; ++i) xs.push_back(rng.normal());
      } else {
        throw ConfigError("orlicz norm needs --input or --normal");
      }
      const auto e = orlicz::luxemburg_norm(xs, q);
      out << "norm " << g10(e.norm) << " q " << g10(q) << " samples " << e.sample_count << "\n";
      return kOk;
    }
    if (action == "rademacher") {
      std::vector<std::vector<double>> table;
      std::stringstream ss(read_text(input));
      std::string line;
      while (std::getline(ss, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::stringstream ls(line);
        std::vector<double> row;
        std::string tok;
        while (ls >> tok) row.push_back(to_number(tok, input));
        if (!row.empty()) table.push_back(row);
      }
      if (table.empty()) throw ConfigError("rademacher: empty table in '" + input + "'");
      complexity::RademacherOptions o;
      o.exhaustive = exhaustive;
      o.draws = draws;
      o.seed = seed;
      const auto r = complexity::empirical_rademacher(table, o);
      out << "rademacher " << g10(r.value) << " se " << g10(r.std_error) << " draws " << r.draws
          << (r.exhaustive ? " exhaustive" : "") << "\n";
      return kOk;
    }
    if (action == "dudley") {
      const auto parts = split(cover_spec, ':');
      complexity::CoveringSpec cover = complexity::CoveringSpec::unit_ball(1);
      if (parts[0] == "unit" && parts.size() == 2) {
        cover = complexity::CoveringSpec::unit_ball(static_cast<int>(to_number(parts[1], cover_spec)));
      } else if (parts[0] == "ball" && parts.size() == 3) {
        cover = complexity::CoveringSpec::ball(static_cast<int>(to_number(parts[1], cover_spec)),
                                               to_number(parts[2], cover_spec));
      } else {
        throw ConfigError("cover '" + cover_spec + "': expected unit:k or ball:k:R");
      }
      const auto b = complexity::entropy_integral_bound_detail(cover, n);
      out << "bound " << g10(b.value) << " eta* " << g10(b.eta_star) << "\n";
      return kOk;
    }
    if (action == "selfcheck") {
      bool ok = true;
      for (const auto& c : selfcheck()) {
        out << (c.pass ? "pass" : "FAIL") << "  " << c.name << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
        ok = ok && c.pass;
      }
      return ok ? kOk : kViolation;
    }

    const auto text = read_text(config_path);
    const auto j = parse_config_text(text, config_path);
    GlobalFields g;
    experiments::Outcome o;
    if (action == "ulln certify" || action == "opt certify") {
      auto jj = j;
      if (!jj.is_object()) throw ConfigError(config_path + ": top level must be an object");
      if (!jj.contains("command")) jj["command"] = action;
      auto c = toy_config(jj, g, text);
      if (jj["command"] != action) throw ConfigError("field /command: config is for '" + jj["command"].get<std::string>() + "'");
      if (!out_path.empty()) g.output_path = out_path;
      o = action == "ulln certify" ? experiments::run_ulln_certify(c) : experiments::run_opt_certify(c);
    } else if (action == "dsm run") {
      auto c = dsm_config(j, g, text);
      if (!out_path.empty()) g.output_path = out_path;
      o = experiments::run_dsm(c);
    } else if (action == "gan run") {
      auto c = gan_config(j, g, text);
      if (!out_path.empty()) g.output_path = out_path;
      o = experiments::run_gan(c);
    } else {
      err << "no command\n";
      return kUsage;
    }
    return report(o, g, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace concentra::cli
