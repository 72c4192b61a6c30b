#include "thinflow/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "thinflow/csv.hpp"

namespace thinflow {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

struct Ctx {
  std::string key;
  int line;
  [[noreturn]] void fail(ErrorCode code, const std::string& msg) const { throw ConfigError(code, key, line, msg); }
};

double number(const Ctx& c, const std::string& v) {
  double d = 0.0;
  if (!parse_double(v, d) || !std::isfinite(d)) c.fail(ErrorCode::TypeMismatch, "expected a finite number, got '" + v + "'");
  return d;
}

Index integer(const Ctx& c, const std::string& v) {
  Index n = 0;
  std::istringstream in(v);
  if (!(in >> n) || !in.eof()) c.fail(ErrorCode::TypeMismatch, "expected an integer, got '" + v + "'");
  return n;
}

std::vector<double> numbers(const Ctx& c, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(number(c, item));
  return out;
}

using Setter = std::function<void(RunConfig&, const Ctx&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"geometry.porous_width", [](RunConfig& r, const Ctx& c, const std::string& v) { r.geometry.porous_width = number(c, v); }},
      {"geometry.porous_depth", [](RunConfig& r, const Ctx& c, const std::string& v) { r.geometry.porous_depth = number(c, v); }},
      {"resolution.nx", [](RunConfig& r, const Ctx& c, const std::string& v) { r.nx = integer(c, v); }},
      {"resolution.ny", [](RunConfig& r, const Ctx& c, const std::string& v) { r.ny = integer(c, v); }},
      {"resolution.nz", [](RunConfig& r, const Ctx& c, const std::string& v) { r.nz = integer(c, v); }},
      {"coefficients.Q",
       [](RunConfig& r, const Ctx& c, const std::string& v) {
         const auto q = numbers(c, v);
         if (q.size() != 4) c.fail(ErrorCode::TypeMismatch, "expected four comma-separated entries (row-major 2x2)");
         r.coeffs.Q = {q[0], q[1], q[2], q[3]};
       }},
      {"coefficients.mu", [](RunConfig& r, const Ctx& c, const std::string& v) { r.coeffs.mu = number(c, v); }},
      {"coefficients.alpha", [](RunConfig& r, const Ctx& c, const std::string& v) { r.coeffs.alpha = number(c, v); }},
      {"coefficients.beta", [](RunConfig& r, const Ctx& c, const std::string& v) { r.coeffs.beta = number(c, v); }},
      {"forcing.preset", [](RunConfig& r, const Ctx&, const std::string& v) { r.forcing.preset = v; }},
      {"forcing.f2_T", [](RunConfig& r, const Ctx& c, const std::string& v) { r.forcing.f2_T = number(c, v); }},
      {"forcing.f2_N", [](RunConfig& r, const Ctx& c, const std::string& v) { r.forcing.f2_N = number(c, v); }},
      {"forcing.h1", [](RunConfig& r, const Ctx& c, const std::string& v) { r.forcing.h1 = number(c, v); }},
      {"forcing.perturbation", [](RunConfig& r, const Ctx& c, const std::string& v) { r.forcing.perturbation = number(c, v); }},
      {"sweep.epsilons", [](RunConfig& r, const Ctx& c, const std::string& v) { r.epsilons = numbers(c, v); }},
      {"solver.inner_tol", [](RunConfig& r, const Ctx& c, const std::string& v) { r.solver.inner_tol = number(c, v); }},
      {"solver.outer_tol", [](RunConfig& r, const Ctx& c, const std::string& v) { r.solver.outer_tol = number(c, v); }},
      {"solver.inner_cap_factor", [](RunConfig& r, const Ctx& c, const std::string& v) { r.solver.inner_cap_factor = number(c, v); }},
      {"solver.outer_cap_factor", [](RunConfig& r, const Ctx& c, const std::string& v) { r.solver.outer_cap_factor = number(c, v); }},
      {"solver.inner",
       [](RunConfig& r, const Ctx& c, const std::string& v) {
         if (v == "cholesky") r.solver.inner = InnerSolver::Cholesky;
         else if (v == "cg") r.solver.inner = InnerSolver::CG;
         else c.fail(ErrorCode::TypeMismatch, "expected 'cholesky' or 'cg'");
       }},
      {"output.dir", [](RunConfig& r, const Ctx&, const std::string& v) { r.output_dir = v; }},
      {"output.dump_fields",
       [](RunConfig& r, const Ctx& c, const std::string& v) {
         if (v == "true") r.dump_fields = true;
         else if (v == "false") r.dump_fields = false;
         else c.fail(ErrorCode::TypeMismatch, "expected 'true' or 'false'");
       }},
  };
  return table;
}

void check_constraints(const RunConfig& r, const std::map<std::string, int>& lines) {
  auto at = [&lines](const std::string& key) {
    auto it = lines.find(key);
    return Ctx{key, it == lines.end() ? 0 : it->second};
  };
  auto need = [&at](bool ok, const std::string& key, const std::string& msg) {
    if (!ok) at(key).fail(ErrorCode::ConstraintViolation, msg);
  };
  need(r.geometry.porous_width > 0.0, "geometry.porous_width", "must be positive");
  need(r.geometry.porous_depth > 0.0, "geometry.porous_depth", "must be positive");
  need(r.nx >= 2, "resolution.nx", "must be at least 2");
  need(r.ny >= 2, "resolution.ny", "must be at least 2");
  need(r.nz >= 2, "resolution.nz", "must be at least 2");
  need(std::abs(r.coeffs.Q.a12 - r.coeffs.Q.a21) <= 1e-12, "coefficients.Q", "Q must be symmetric");
  {
    CoefficientSet probe = r.coeffs;
    probe.mu = 1.0;
    probe.alpha = probe.beta = 0.0;
    bool elliptic = true;
    try {
      validate(probe);
    } catch (const Error&) {
      elliptic = false;
    }
    need(elliptic, "coefficients.Q", "Q must be positive definite");
  }
  need(r.coeffs.mu > 0.0, "coefficients.mu", "must be positive");
  need(r.coeffs.alpha >= 0.0, "coefficients.alpha", "must be non-negative");
  need(r.coeffs.beta >= 0.0, "coefficients.beta", "must be non-negative");
  need(is_known_preset(r.forcing.preset), "forcing.preset", "unknown preset '" + r.forcing.preset + "'");
  need(!r.epsilons.empty(), "sweep.epsilons", "list is empty");
  for (std::size_t i = 0; i < r.epsilons.size(); ++i) {
    need(r.epsilons[i] > 0.0 && r.epsilons[i] < 1.0, "sweep.epsilons", "every epsilon must lie in (0,1)");
    if (i > 0) need(r.epsilons[i] < r.epsilons[i - 1], "sweep.epsilons", "list must be strictly decreasing");
  }
  need(r.solver.inner_tol > 0.0, "solver.inner_tol", "must be positive");
  need(r.solver.outer_tol > 0.0, "solver.outer_tol", "must be positive");
  need(r.solver.inner_cap_factor > 0.0, "solver.inner_cap_factor", "must be positive");
  need(r.solver.outer_cap_factor > 0.0, "solver.outer_cap_factor", "must be positive");
  need(!r.output_dir.empty(), "output.dir", "must not be empty");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig r;
  std::map<std::string, int> lines;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(ErrorCode::TypeMismatch, trim(line), lineno, "expected 'section.key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(ErrorCode::UnknownKey, key, lineno, "unknown key");
    if (lines.count(key)) throw ConfigError(ErrorCode::ConstraintViolation, key, lineno, "key given twice");
    lines[key] = lineno;
    it->second(r, Ctx{key, lineno}, value);
  }
  check_constraints(r, lines);
  return r;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const RunConfig& r) {
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
  };
  std::ostringstream o;
  o << "geometry.porous_width = " << format_double(r.geometry.porous_width) << '\n'
    << "geometry.porous_depth = " << format_double(r.geometry.porous_depth) << '\n'
    << "resolution.nx = " << r.nx << '\n'
    << "resolution.ny = " << r.ny << '\n'
    << "resolution.nz = " << r.nz << '\n'
    << "coefficients.Q = " << list({r.coeffs.Q.a11, r.coeffs.Q.a12, r.coeffs.Q.a21, r.coeffs.Q.a22}) << '\n'
    << "coefficients.mu = " << format_double(r.coeffs.mu) << '\n'
    << "coefficients.alpha = " << format_double(r.coeffs.alpha) << '\n'
    << "coefficients.beta = " << format_double(r.coeffs.beta) << '\n'
    << "forcing.preset = " << r.forcing.preset << '\n'
    << "forcing.f2_T = " << format_double(r.forcing.f2_T) << '\n'
    << "forcing.f2_N = " << format_double(r.forcing.f2_N) << '\n'
    << "forcing.h1 = " << format_double(r.forcing.h1) << '\n'
    << "forcing.perturbation = " << format_double(r.forcing.perturbation) << '\n'
    << "sweep.epsilons = " << list(r.epsilons) << '\n'
    << "solver.inner_tol = " << format_double(r.solver.inner_tol) << '\n'
    << "solver.outer_tol = " << format_double(r.solver.outer_tol) << '\n'
    << "solver.inner_cap_factor = " << format_double(r.solver.inner_cap_factor) << '\n'
    << "solver.outer_cap_factor = " << format_double(r.solver.outer_cap_factor) << '\n'
    << "solver.inner = " << (r.solver.inner == InnerSolver::CG ? "cg" : "cholesky") << '\n'
    << "output.dir = " << r.output_dir << '\n'
    << "output.dump_fields = " << (r.dump_fields ? "true" : "false") << '\n';
  return o.str();
}

}  // namespace thinflow
