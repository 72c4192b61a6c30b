#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "thinflow/cli.hpp"
#include "thinflow/config.hpp"
#include "thinflow/csv.hpp"

using namespace thinflow;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("thinflow_test_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path config(const std::string& body, const std::string& out = "out") const {
    const fs::path p = path / "run.cfg";
    std::ofstream(p) << body << "output.dir = " << (path / out).string() << '\n';
    return p;
  }
};

int run(const std::vector<std::string>& args, std::string* err = nullptr) {
  std::ostringstream o, e;
  const int rc = run_command(args, o, e);
  if (err) *err = e.str();
  return rc;
}

Index lines(const std::string& s) { return static_cast<Index>(std::count(s.begin(), s.end(), '\n')); }

const char* kSmall = "resolution.nx = 8\nresolution.ny = 8\nresolution.nz = 8\nsweep.epsilons = 0.5, 0.25, 0.125\n";

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0, 123456789.0}) {
    double back = 0.0;
    REQUIRE(parse_double(format_double(v), back));
    CHECK(back == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(NAN) == "nan");
  CHECK(format_optional(std::nullopt) == "None");
  double x;
  CHECK_FALSE(parse_double("1.5x", x));
  CHECK(parse_double("+2", x));
  CHECK(x == 2.0);
}

TEST_CASE("config defaults and errors") {
  const RunConfig d = parse_config("# nothing\n\n");
  CHECK(d.coeffs.mu == 1.0);
  CHECK(d.coeffs.alpha == 0.0);
  CHECK(d.coeffs.beta == 1.0);
  CHECK(d.coeffs.Q == Tensor2::identity());
  CHECK(d.nx == 64);

  auto fails = [](const std::string& text, ErrorCode code, const std::string& key, int line) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      CHECK(e.code() == code);
      CHECK(e.key() == key);
      CHECK(e.line() == line);
      return;
    }
    FAIL("expected a ConfigError for: " << text);
  };
  fails("resolution.nx = 4\ncoefficients.Q = 1, 0.5, 0.2, 1\n", ErrorCode::ConstraintViolation, "coefficients.Q", 2);
  fails("sweep.epsilons = 0.5, 0.5\n", ErrorCode::ConstraintViolation, "sweep.epsilons", 1);
  fails("\nfoo.bar = 1\n", ErrorCode::UnknownKey, "foo.bar", 2);
  fails("resolution.nx = many\n", ErrorCode::TypeMismatch, "resolution.nx", 1);
  fails("coefficients.mu = 1\ncoefficients.mu = 2\n", ErrorCode::ConstraintViolation, "coefficients.mu", 2);
  fails("forcing.preset = wavy\n", ErrorCode::ConstraintViolation, "forcing.preset", 1);
}

TEST_CASE("config round trip") {
  RunConfig c;
  c.nx = 12;
  c.coeffs.Q = {2, 0.3, 0.3, 1.5};
  c.coeffs.alpha = 0.1;
  c.forcing = {"eps-perturbed", 0.7, -0.2, 1.0 / 3.0, 0.25};
  c.epsilons = {0.3, 0.1, 1e-3};
  c.solver.inner = InnerSolver::CG;
  c.output_dir = "somewhere/else";
  c.dump_fields = true;
  CHECK(parse_config(render_config(c)) == c);
  CHECK(parse_config(render_config(RunConfig{})) == RunConfig{});
}

TEST_CASE("sweep writes both tables, byte-identical across runs") {
  TempDir t("sweep");
  const auto cfg = t.config(kSmall);
  REQUIRE(run({"sweep", "--config", cfg.string()}) == 0);
  const std::string sweep = slurp(t.path / "out" / "sweep.csv");
  const std::string rates = slurp(t.path / "out" / "rates.csv");
  CHECK(sweep.rfind(
            "epsilon,err_v1_hdiv,err_vT,err_dz_vT,err_vN_hdz,err_p1,err_p2,energy_residual,apriori_E,ratio_T_N,"
            "vanish_dzvT,vanish_gradT_epsvN\n",
            0) == 0);
  CHECK(lines(sweep) == 4);
  CHECK(rates.rfind("quantity,rate,r2\n", 0) == 0);
  REQUIRE(run({"sweep", "--config", cfg.string()}) == 0);
  CHECK(slurp(t.path / "out" / "sweep.csv") == sweep);
  CHECK(slurp(t.path / "out" / "rates.csv") == rates);
}

TEST_CASE("field dumps") {
  TempDir t("dump");
  const auto cfg = t.config(kSmall);
  REQUIRE(run({"solve-limit", "--config", cfg.string(), "--dump-fields"}) == 0);
  for (const char* f : {"p1.csv", "p2.csv", "v1_x.csv", "v1_y.csv", "vT2.csv", "xi.csv", "solve_limit.csv"})
    CHECK(fs::exists(t.path / "out" / f));
  CHECK(slurp(t.path / "out" / "p2.csv").rfind("x,value\n", 0) == 0);
  CHECK(slurp(t.path / "out" / "xi.csv").rfind("x,z,value\n", 0) == 0);
  CHECK(slurp(t.path / "out" / "p1.csv").rfind("x,y,value\n", 0) == 0);
  CHECK(lines(slurp(t.path / "out" / "vT2.csv")) == 1 + 9);

  REQUIRE(run({"solve-eps", "--config", cfg.string(), "--epsilon", "0.25", "--dump-fields"}) == 0);
  CHECK(slurp(t.path / "out" / "p2.csv").rfind("x,z,value\n", 0) == 0);
  CHECK(lines(slurp(t.path / "out" / "p2.csv")) == 1 + 64);
}

TEST_CASE("infsup and mms subcommands") {
  TempDir t("infsup");
  REQUIRE(run({"infsup", "--problem", "limit", "--levels", "8,16,32", "--out", t.path.string()}) == 0);
  const std::string s = slurp(t.path / "infsup.csv");
  CHECK(lines(s) == 4);
  REQUIRE(run({"mms", "--case", "darcy-sin", "--levels", "4,8", "--out", t.path.string()}) == 0);
  CHECK(lines(slurp(t.path / "mms.csv")) == 3);
}

TEST_CASE("check subcommand") {
  TempDir t("check");
  const auto cfg = t.config(kSmall);
  CHECK(run({"check", "--config", cfg.string()}) == 0);
  const std::string c = slurp(t.path / "out" / "check.csv");
  CHECK(c.rfind("check,value,threshold,pass\n", 0) == 0);
  CHECK(c.find(",false\n") == std::string::npos);
}

TEST_CASE("failures print one parsable line") {
  TempDir t("errors");
  std::string err;
  CHECK(run({"solve-eps", "--config", (t.path / "missing.cfg").string(), "--epsilon", "0.5"}, &err) == 1);
  CHECK(err.rfind("error: command=solve-eps code=Io ", 0) == 0);
  CHECK(lines(err) == 1);

  const auto bad = t.config("resolution.nx = 8\nsweep.epsilons = 0.5, 0.7\n");
  CHECK(run({"sweep", "--config", bad.string()}, &err) == 1);
  CHECK(err.rfind("error: command=sweep code=ConstraintViolation key=sweep.epsilons line=2 ", 0) == 0);

  CHECK(run({"mms", "--case", "nope", "--levels", "4"}, &err) == 1);
  CHECK(err.rfind("error: command=mms code=", 0) == 0);
  CHECK(run({"infsup", "--problem", "eps", "--levels", "8,x"}, &err) == 1);
  CHECK(err.find("code=InvalidArgument") != std::string::npos);
  CHECK(run({"frobnicate"}, &err) != 0);
  CHECK(err.rfind("error: command=frobnicate code=InvalidArgument", 0) == 0);
  CHECK(run({}, &err) != 0);
  CHECK(lines(err) == 1);
}
