#include "thinflow/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <sstream>

#include "thinflow/convergence.hpp"
#include "thinflow/epsilon_problem.hpp"
#include "thinflow/limit_problem.hpp"
#include "thinflow/mms.hpp"
#include "thinflow/norms.hpp"

namespace thinflow {

namespace fs = std::filesystem;

namespace {

std::string join(const fs::path& dir, const std::string& file) { return (dir / file).string(); }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create directory " + dir + ": " + ec.message());
}

CsvTable quantity_table() { return CsvTable({"quantity", "value"}); }

void add_quantity(CsvTable& t, const std::string& name, double v) { t.add_row({name, format_double(v)}); }

// ---------------------------------------------------------------- field dumps

void dump_porous(const GridPair& g, const Vector& v1, const Vector& p1, const std::string& dir) {
  CsvTable p({"x", "y", "value"}), vx({"x", "y", "value"}), vy({"x", "y", "value"});
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 0; i < g.nx; ++i)
      p.add_row({format_double(g.x_center(i)), format_double(g.y_center(j)), format_double(p1[g.cell(i, j)])});
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 0; i <= g.nx; ++i)
      vx.add_row({format_double(g.x_node(i)), format_double(g.y_center(j)), format_double(v1[g.vface(i, j)])});
  for (Index j = 0; j <= g.ny; ++j)
    for (Index i = 0; i < g.nx; ++i)
      vy.add_row({format_double(g.x_center(i)), format_double(g.y_node(j)),
                  format_double(v1[g.n_vfaces() + g.hface(i, j)])});
  p.write(join(dir, "p1.csv"));
  vx.write(join(dir, "v1_x.csv"));
  vy.write(join(dir, "v1_y.csv"));
}

void dump_normal_faces(const GridPair& g, const Vector& f, const std::string& path) {
  CsvTable t({"x", "z", "value"});
  for (Index k = 0; k <= g.nz; ++k)
    for (Index i = 0; i < g.nx; ++i)
      t.add_row({format_double(g.x_center(i)), format_double(g.z_node(k)), format_double(f[g.nface(i, k)])});
  t.write(path);
}

void dump_epsilon(const GridPair& g, const EpsilonSolution& s, const std::string& dir) {
  dump_porous(g, s.v1, s.p1, dir);
  CsvTable p({"x", "z", "value"}), vt({"x", "z", "value"});
  for (Index k = 0; k < g.nz; ++k)
    for (Index i = 0; i < g.nx; ++i)
      p.add_row({format_double(g.x_center(i)), format_double(g.z_center(k)), format_double(s.p2[g.ccell(i, k)])});
  for (Index k = 0; k < g.nz; ++k)
    for (Index i = 0; i <= g.nx; ++i)
      vt.add_row({format_double(g.x_node(i)), format_double(g.z_center(k)), format_double(s.vT2[g.tface(i, k)])});
  p.write(join(dir, "p2.csv"));
  vt.write(join(dir, "vT2.csv"));
  dump_normal_faces(g, s.vN2, join(dir, "vN2.csv"));
}

void dump_limit(const GridPair& g, const LimitSolution& s, const std::string& dir) {
  dump_porous(g, s.v1, s.p1, dir);
  CsvTable p({"x", "value"}), vt({"x", "value"});
  for (Index i = 0; i < g.nx; ++i) p.add_row({format_double(g.x_center(i)), format_double(s.p2[i])});
  for (Index i = 0; i <= g.nx; ++i) vt.add_row({format_double(g.x_node(i)), format_double(s.vT2[i])});
  p.write(join(dir, "p2.csv"));
  vt.write(join(dir, "vT2.csv"));
  dump_normal_faces(g, s.xi, join(dir, "xi.csv"));
}

// ---------------------------------------------------------------- commands

int cmd_solve_eps(const std::string& config, double eps, bool dump, std::ostream& out) {
  const RunConfig cfg = load_config(config);
  const auto [g, layout] = build_grids(cfg.geometry, cfg.nx, cfg.ny, cfg.nz);
  const EpsilonSystem es = assemble_epsilon(cfg.coeffs, cfg.forcing, g, layout, eps);
  const EpsilonSolution sol = solve_epsilon(es, cfg.solver);
  const NormSuite norms(g, cfg.coeffs);

  ensure_dir(cfg.output_dir);
  CsvTable t = quantity_table();
  add_quantity(t, "epsilon", eps);
  add_quantity(t, "kkt_residual", sol.kkt_residual);
  add_quantity(t, "energy_residual", energy_identity_residual(sol, es));
  add_quantity(t, "mass_residual", mass_conservation_residual(es, sol));
  add_quantity(t, "outer_iterations", static_cast<double>(sol.outer_iterations));
  for (const auto& [name, v] : apriori_quantities(sol, g).labeled()) add_quantity(t, "apriori_" + name, v);
  const auto ratio = velocity_ratio(sol, norms);
  t.add_row({"ratio_T_N", format_optional(ratio)});
  t.write(join(cfg.output_dir, "solve_eps.csv"));
  if (dump || cfg.dump_fields) dump_epsilon(g, sol, cfg.output_dir);
  out << "solve-eps epsilon=" << format_double(eps) << " kkt=" << format_double(sol.kkt_residual)
      << " outer_iterations=" << sol.outer_iterations << '\n';
  return 0;
}

int cmd_solve_limit(const std::string& config, bool dump, std::ostream& out) {
  const RunConfig cfg = load_config(config);
  const auto [g, layout] = build_grids(cfg.geometry, cfg.nx, cfg.ny, cfg.nz);
  (void)layout;
  const LimitSystem ls = assemble_limit(cfg.coeffs, cfg.forcing, g);
  const LimitSolution sol = solve_limit(ls, cfg.solver);

  ensure_dir(cfg.output_dir);
  CsvTable t = quantity_table();
  add_quantity(t, "kkt_residual", sol.kkt_residual);
  add_quantity(t, "pressure_identity_residual", pressure_identity_residual(sol, cfg.coeffs, g));
  add_quantity(t, "xi_divergence_residual", xi_divergence_residual(sol, g));
  add_quantity(t, "outer_iterations", static_cast<double>(sol.outer_iterations));
  t.write(join(cfg.output_dir, "solve_limit.csv"));
  if (dump || cfg.dump_fields) dump_limit(g, sol, cfg.output_dir);
  out << "solve-limit kkt=" << format_double(sol.kkt_residual) << " outer_iterations=" << sol.outer_iterations << '\n';
  return 0;
}

int cmd_sweep(const std::string& config, std::ostream& out) {
  const RunConfig cfg = load_config(config);
  const ConvergenceReport rep = run_sweep(cfg);
  ensure_dir(cfg.output_dir);

  CsvTable sweep({"epsilon", "err_v1_hdiv", "err_vT", "err_dz_vT", "err_vN_hdz", "err_p1", "err_p2", "energy_residual",
                  "apriori_E", "ratio_T_N", "vanish_dzvT", "vanish_gradT_epsvN"});
  for (const auto& r : rep.rows) {
    sweep.add_row({format_double(r.epsilon), format_double(r.err_v1_hdiv), format_double(r.err_vT),
                   format_double(r.err_dz_vT), format_double(r.err_vN_hdz), format_double(r.err_p1),
                   format_double(r.err_p2), format_double(r.energy_residual), format_double(r.apriori_E),
                   format_optional(r.ratio_T_N), format_double(r.vanish_dzvT), format_double(r.vanish_gradT_epsvN)});
    if (!r.error.empty()) out << "sweep epsilon=" << format_double(r.epsilon) << " failed: " << r.error << '\n';
  }
  sweep.write(join(cfg.output_dir, "sweep.csv"));

  CsvTable rates({"quantity", "rate", "r2"});
  for (const auto& r : rep.rates) rates.add_row({r.quantity, format_double(r.fit.rate), format_double(r.fit.r2)});
  rates.write(join(cfg.output_dir, "rates.csv"));
  out << "sweep rows=" << rep.rows.size() << " dir=" << cfg.output_dir << '\n';
  return 0;
}

int cmd_mms(const std::string& name, const std::string& levels, const std::string& dir, std::ostream& out) {
  const ManufacturedCase mc = manufactured_case(name);
  const MmsTable t = mms_convergence(mc, parse_levels(levels));
  ensure_dir(dir);
  std::vector<std::string> header{"n", "h"};
  for (const auto& [field, _] : t.levels.front().errors) header.push_back("err_" + field);
  CsvTable errs(header);
  for (const auto& l : t.levels) {
    std::vector<std::string> row{std::to_string(l.n), format_double(l.h)};
    for (const auto& [field, e] : l.errors) row.push_back(format_double(e));
    errs.add_row(row);
  }
  errs.write(join(dir, "mms.csv"));
  CsvTable rates({"quantity", "rate", "r2"});
  for (const auto& [field, fit] : t.orders) {
    if (fit) rates.add_row({"err_" + field, format_double(fit->rate), format_double(fit->r2)});
    out << "mms case=" << name << " field=" << field << " order=" << (fit ? format_double(fit->rate) : "None") << '\n';
  }
  rates.write(join(dir, "mms_rates.csv"));
  return 0;
}

int cmd_infsup(const std::string& problem, const std::string& levels, double eps, const std::string& dir,
               std::ostream& out) {
  if (problem != "eps" && problem != "limit") throw Error(ErrorCode::InvalidArgument, "problem must be eps or limit");
  ensure_dir(dir);
  CsvTable t({"problem", "n", "constant", "eigenvalue", "iterations"});
  for (Index n : parse_levels(levels)) {
    const auto [g, layout] = build_grids(DomainSpec{}, n, n, n);
    InfSupReport rep;
    if (problem == "eps") {
      const EpsilonSystem es = assemble_epsilon(CoefficientSet{}, ForcingSet{"zero"}, g, layout, eps);
      const InfSupForms f = epsilon_infsup_forms(g, layout);
      rep = estimate_inf_sup(es.sys.B, f.gram, f.pressure_mass);
    } else {
      const LimitSystem ls = assemble_limit(CoefficientSet{}, ForcingSet{"zero"}, g);
      const InfSupForms f = limit_infsup_forms(g, ls.layout);
      rep = estimate_inf_sup(ls.sys.B, f.gram, f.pressure_mass);
    }
    t.add_row({problem, std::to_string(n), format_double(rep.constant), format_double(rep.eigenvalue),
               std::to_string(rep.iterations)});
    out << "infsup problem=" << problem << " n=" << n << " constant=" << format_double(rep.constant) << '\n';
  }
  t.write(join(dir, "infsup.csv"));
  return 0;
}

int cmd_check(const std::string& config, std::ostream& out) {
  const RunConfig cfg = load_config(config);
  const auto results = run_checks(cfg, out);
  ensure_dir(cfg.output_dir);
  CsvTable t({"check", "value", "threshold", "pass"});
  bool ok = true;
  for (const auto& r : results) {
    t.add_row({r.name, format_double(r.value), format_double(r.threshold), r.pass ? "true" : "false"});
    ok = ok && r.pass;
  }
  t.write(join(cfg.output_dir, "check.csv"));
  out << "check " << (ok ? "passed" : "FAILED") << " (" << results.size() << " checks)\n";
  return ok ? 0 : 1;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '"' || c == '\\') o += '\\';
    o += (c == '\n') ? ' ' : c;
  }
  return o;
}

}  // namespace

std::vector<Index> parse_levels(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 2) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad level '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no levels given");
  return out;
}

std::vector<CheckResult> run_checks(const RunConfig& cfg, std::ostream& log) {
  std::vector<CheckResult> res;
  auto add = [&](const std::string& name, double v, double thr) {
    res.push_back({name, v, thr, std::isfinite(v) && v <= thr});
    log << "check " << name << " = " << format_double(v) << " (<= " << format_double(thr) << ")"
        << (res.back().pass ? "" : "  FAIL") << '\n';
  };

  add("config_roundtrip", parse_config(render_config(cfg)) == cfg ? 0.0 : 1.0, 0.0);
  const double cq = validate(cfg.coeffs);
  add("ellipticity_negated", -cq, 0.0);
  const Tensor2 s = sqrt_Q(cfg.coeffs);
  add("sqrtQ_square_error", (s * s).max_abs_diff(cfg.coeffs.Q), 1e-12);

  const auto [g, layout] = build_grids(cfg.geometry, cfg.nx, cfg.ny, cfg.nz);
  const NormSuite norms(g, cfg.coeffs);

  const LimitSystem ls = assemble_limit(cfg.coeffs, cfg.forcing, g);
  const LimitSolution lim = solve_limit(ls, cfg.solver);
  add("limit_kkt_residual", lim.kkt_residual, 1e-10);
  add("limit_xi_divergence", xi_divergence_residual(lim, g), 1e-8);

  bool first = true;
  for (double eps : cfg.epsilons) {
    const std::string tag = "eps=" + format_double(eps) + ":";
    const EpsilonSystem es = assemble_epsilon(cfg.coeffs, cfg.forcing, g, layout, eps);
    const EpsilonSolution sol = solve_epsilon(es, cfg.solver);
    add(tag + "kkt_residual", sol.kkt_residual, 1e-10);
    add(tag + "energy_identity", energy_identity_residual(sol, es), 1e-10);
    add(tag + "mass_conservation", mass_conservation_residual(es, sol), 1e-9);
    double ulps = 0.0;
    for (Index i = 0; i < g.nx; ++i) {
      const double a = sol.v1[g.n_vfaces() + g.hface(i, g.ny)];
      const double b = sol.vN2[g.nface(i, 0)];
      if (std::memcmp(&a, &b, sizeof a) != 0) ulps += 1.0;
    }
    add(tag + "interface_mismatch", ulps, 0.0);
    Vector epsT(sol.vT2);
    for (double& v : epsT) v *= eps;
    add(tag + "trace_excess_vN",
        norms.trace_normal(sol.vN2) - std::sqrt(2.0) * (norms.l2_normal(sol.vN2) + norms.dz_normal(sol.vN2)), 0.0);
    add(tag + "trace_excess_epsvT",
        norms.trace_tangential(epsT) - std::sqrt(2.0) * (norms.l2_tangential(epsT) + norms.dz_tangential(epsT)), 0.0);
    if (first) {
      first = false;
      const EpsilonSolution again = solve_epsilon(es, cfg.solver);
      const bool same = again.v == sol.v && again.p == sol.p;
      add(tag + "repeat_differs", same ? 0.0 : 1.0, 0.0);
      Vector p0(sol.p.size());
      for (std::size_t i = 0; i < p0.size(); ++i) p0[i] = std::sin(1.3 * static_cast<double>(i));
      const EpsilonSolution other = solve_epsilon(es, cfg.solver, &p0);
      double diff = 0.0;
      for (std::size_t i = 0; i < sol.p.size(); ++i) diff = std::max(diff, std::abs(other.p[i] - sol.p[i]));
      add(tag + "pressure_uniqueness", diff / (1.0 + norm_max(sol.p)), 1e-8);
    }
  }
  return res;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"thinflow: thin-channel Darcy-Stokes solver and limit verification"};
  app.require_subcommand(1);

  std::string config, mms_case, levels, problem = "eps", dir = ".";
  double eps = 0.0, infsup_eps = 0.25;
  bool dump = false;

  auto* se = app.add_subcommand("solve-eps", "solve the epsilon problem");
  se->add_option("--config", config)->required();
  se->add_option("--epsilon", eps)->required();
  se->add_flag("--dump-fields", dump);
  auto* sl = app.add_subcommand("solve-limit", "solve the reduced limit problem");
  sl->add_option("--config", config)->required();
  sl->add_flag("--dump-fields", dump);
  auto* sw = app.add_subcommand("sweep", "epsilon sweep against the limit");
  sw->add_option("--config", config)->required();
  auto* mm = app.add_subcommand("mms", "manufactured-solution convergence");
  mm->add_option("--case", mms_case)->required();
  mm->add_option("--levels", levels)->required();
  mm->add_option("--out", dir);
  auto* is = app.add_subcommand("infsup", "inf-sup constant estimates");
  is->add_option("--problem", problem)->required();
  is->add_option("--levels", levels)->required();
  is->add_option("--epsilon", infsup_eps);
  is->add_option("--out", dir);
  auto* ck = app.add_subcommand("check", "invariant suite");
  ck->add_option("--config", config)->required();

  std::string command = args.empty() ? "-" : args.front();
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: command=" << command << " code=InvalidArgument key=- line=- message=\"" << escape(e.what())
        << "\"\n";
    return 2;
  }

  try {
    if (se->parsed()) return cmd_solve_eps(config, eps, dump, out);
    if (sl->parsed()) return cmd_solve_limit(config, dump, out);
    if (sw->parsed()) return cmd_sweep(config, out);
    if (mm->parsed()) return cmd_mms(mms_case, levels, dir, out);
    if (is->parsed()) return cmd_infsup(problem, levels, infsup_eps, dir, out);
    if (ck->parsed()) return cmd_check(config, out);
  } catch (const ConfigError& e) {
    err << "error: command=" << command << " code=" << to_string(e.code()) << " key=" << e.key() << " line=" << e.line()
        << " message=\"" << escape(e.what()) << "\"\n";
    return 1;
  } catch (const Error& e) {
    err << "error: command=" << command << " code=" << to_string(e.code()) << " key=- line=- message=\""
        << escape(e.what()) << "\"\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: command=" << command << " code=Internal key=- line=- message=\"" << escape(e.what()) << "\"\n";
    return 1;
  }
  return 1;
}

}  // namespace thinflow
