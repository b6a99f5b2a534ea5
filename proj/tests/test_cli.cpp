#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "concentra/cli.hpp"
#include "concentra/experiments.hpp"

using namespace concentra;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int c = cli::run(args, o, e);
  return {c, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "concentra_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string write(const std::string& name, const std::string& body) {
  const auto p = scratch(name);
  std::ofstream(p) << body;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("bound legendre") {
    const auto r = run({"bound", "legendre", "--xi", "quadratic:1", "--t", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "value 1 lambda* 1\n");
  }

  TEST_CASE("bound mcdiarmid and xi parsing") {
    const auto r = run({"bound", "mcdiarmid", "--xi", "quadratic:0.5", "--t", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("bound 0.6065306597") != std::string::npos);
    CHECK(cli::parse_xi("series:2:1.5").q() == 2.0);
    CHECK(cli::parse_xi("psi1:2").domain_limit() == doctest::Approx(0.5));
    CHECK_THROWS_AS(cli::parse_xi("gauss:1"), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_xi("quadratic:x"), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_xi("quadratic:1:2"), cli::ConfigError);
  }

  TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"bound"}).code == 2);
    CHECK(run({"bound", "legendre", "--xi", "quadratic:1"}).code == 2);
    CHECK(run({"bound", "legendre", "--xi", "nope:1", "--t", "1"}).code == 2);
    CHECK(run({"dsm", "run", "--config", "/nonexistent/cfg.json"}).code == 2);
  }

  TEST_CASE("malformed config reports line and column") {
    const auto p = write("bad.json", "{\n  \"n\": 50,\n  \"m\": ,\n}\n");
    const auto r = run({"dsm", "run", "--config", p});
    CHECK(r.code == 2);
    CHECK(r.err.find("bad.json:3:") != std::string::npos);
  }

  TEST_CASE("unknown keys and bad types are rejected with the field path") {
    const std::string base = R"({
  "seed": 1,
  "trials": 10,
  "n": 10,
  "data": {"atoms": [[-1], [1]], "colour": "red"},
  "schedule": {"times": [0.5]}
})";
    const auto r = run({"dsm", "run", "--config", write("unknown.json", base)});
    CHECK(r.code == 2);
    CHECK(r.err.find("field /data/colour: unknown key") != std::string::npos);
    CHECK(r.err.find("line 5") != std::string::npos);

    const auto r2 = run({"gan", "run", "--config", write("type.json", R"({"atoms": [[0]], "n": "ten"})")});
    CHECK(r2.code == 2);
    CHECK(r2.err.find("field /n: expected an integer") != std::string::npos);

    const auto r3 = run({"ulln", "certify", "--config", write("cmd.json", R"({"command": "gan run"})")});
    CHECK(r3.code == 2);
  }

  TEST_CASE("small runs write CSV and summary; worker count does not change bytes") {
    const std::string cfg = R"({
  "command": "ulln certify",
  "seed": 5,
  "trials": 200,
  "n": 20,
  "m": 2,
  "t_grid": [1.0, 2.0]
})";
    const auto path = write("ulln_small.json", cfg);
    const auto out1 = scratch("ulln_w1.csv"), out4 = scratch("ulln_w4.csv");
    setenv("CONCENTRA_WORKERS", "1", 1);
    const auto a = run({"ulln", "certify", "--config", path, "--out", out1.string()});
    setenv("CONCENTRA_WORKERS", "4", 1);
    const auto b = run({"ulln", "certify", "--config", path, "--out", out4.string()});
    unsetenv("CONCENTRA_WORKERS");
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    const auto csv = slurp(out1);
    CHECK(csv == slurp(out4));
    CHECK(csv.rfind("trial,t,event,statistic,threshold,bound,exceeded\r\n", 0) == 0);
    CHECK(fs::exists(scratch("ulln_w1.summary.json")));
    CHECK(a.out.find("phi_plus_shifted") != std::string::npos);
  }

  TEST_CASE("selfcheck") { CHECK(run({"selfcheck"}).code == 0); }
}

TEST_SUITE("experiments") {
  TEST_CASE("csv quoting") {
    using experiments::CsvWriter;
    CHECK(CsvWriter::quote("plain") == "plain");
    CHECK(CsvWriter::quote("a,b") == "\"a,b\"");
    CHECK(CsvWriter::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(CsvWriter::quote("two\nlines") == "\"two\nlines\"");
    CsvWriter w({"x", "note"});
    w.add({CsvWriter::num(0.1), "a,b"});
    CHECK(w.str() == "x,note\r\n0.10000000000000001,\"a,b\"\r\n");
    CHECK_THROWS(w.add({"1"}));
  }

  TEST_CASE("automatic threshold grid inverts the bound") {
    auto bound = [](double t) { return std::min(1.0, std::exp(-t * t)); };
    const auto g = experiments::auto_threshold_grid(bound, 0.85, 1.1e-3, 5);
    REQUIRE(g.size() == 5u);
    CHECK(bound(g.front()) == doctest::Approx(0.85).epsilon(1e-9));
    CHECK(bound(g.back()) == doctest::Approx(1.1e-3).epsilon(1e-9));
    CHECK(experiments::auto_threshold_grid([](double) { return 1.0; }).empty());
  }
}
