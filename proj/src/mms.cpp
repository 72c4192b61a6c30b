#include "thinflow/mms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thinflow/darcy_block.hpp"
#include "thinflow/limit_problem.hpp"

namespace thinflow {

namespace {

constexpr double pi = std::numbers::pi;
using HD = HyperDual;

ManufacturedCase darcy_linear(bool full_q) {
  ManufacturedCase m;
  m.name = full_q ? "darcy-linear-fullq" : "darcy-linear";
  m.kind = CaseKind::DarcyDirichlet;
  m.exact_by_scheme = true;
  m.coeffs.Q = full_q ? Tensor2{2.0, 1.0, 1.0, 2.0} : Tensor2::identity();
  // v = -Q^{-1} grad p with grad p = (2, -3)
  const double vx = full_q ? -7.0 / 3.0 : -2.0;
  const double vy = full_q ? 8.0 / 3.0 : 3.0;
  m.p1 = [](HD x, HD y) { return HD(1.0) + HD(2.0) * x - HD(3.0) * y; };
  m.vx = [vx](HD, HD) { return HD(vx); };
  m.vy = [vy](HD, HD) { return HD(vy); };
  m.h1 = [](HD, HD) { return HD(0.0); };
  return m;
}

ManufacturedCase darcy_sin() {
  ManufacturedCase m;
  m.name = "darcy-sin";
  m.kind = CaseKind::DarcyNoFlowTop;
  m.p1 = [](HD x, HD y) { return sin(HD(pi) * x) * sin(HD(pi / 2) * (y + HD(1.0))); };
  m.vx = [](HD x, HD y) { return HD(-pi) * cos(HD(pi) * x) * sin(HD(pi / 2) * (y + HD(1.0))); };
  m.vy = [](HD x, HD y) { return HD(-pi / 2) * sin(HD(pi) * x) * cos(HD(pi / 2) * (y + HD(1.0))); };
  m.h1 = [](HD x, HD y) { return HD(1.25 * pi * pi) * sin(HD(pi) * x) * sin(HD(pi / 2) * (y + HD(1.0))); };
  return m;
}

// Q = diag(q1, q2); p1 vanishes on the drained sides and v.n = sin(2 pi x) on Γ.
ManufacturedCase limit_sin(const std::string& name, double q1, double q2, double mu, double alpha, double beta) {
  ManufacturedCase m;
  m.name = name;
  m.kind = CaseKind::Limit;
  m.coeffs.Q = Tensor2::diag(q1, q2);
  m.coeffs.mu = mu;
  m.coeffs.alpha = alpha;
  m.coeffs.beta = beta;
  const HD tp(2 * pi);
  m.p1 = [q2, tp](HD x, HD y) { return HD(-0.5 * q2) * sin(tp * x) * (y + HD(1.0)) * (y + HD(1.0)); };
  m.vx = [q1, q2, tp](HD x, HD y) { return HD(q2 / q1 * pi) * cos(tp * x) * (y + HD(1.0)) * (y + HD(1.0)); };
  m.vy = [tp](HD x, HD y) { return sin(tp * x) * (y + HD(1.0)); };
  m.h1 = [q1, q2, tp](HD x, HD y) {
    return HD(-2.0 * pi * pi * q2 / q1) * sin(tp * x) * (y + HD(1.0)) * (y + HD(1.0)) + sin(tp * x);
  };
  m.u = [](HD x) {
    const HD s = sin(HD(pi) * x);
    return s * s / HD(pi);
  };
  const double k = 0.5 * q2 + mu + alpha;
  m.p2 = [k, tp](HD x) { return HD(-k) * sin(tp * x); };
  const double sq1 = std::sqrt(q1);
  m.fbar = [k, tp, mu, beta, sq1](HD x) {
    const HD s = sin(HD(pi) * x);
    return HD(-2 * pi * k) * cos(tp * x) + HD(beta * sq1 / pi) * s * s - HD(2 * pi * mu) * cos(tp * x);
  };
  return m;
}

// value and first derivatives of a two-variable field
struct Grad2 {
  double v, dx, dy;
};
Grad2 grad(const ManufacturedCase::Field2& f, double x, double y) {
  return {f(HD(x), HD(y)).v, f(HD(x, 1, 0, 0), HD(y)).d1, f(HD(x), HD(y, 1, 0, 0)).d1};
}

}  // namespace

std::vector<std::string> manufactured_case_names() {
  return {"darcy-linear", "darcy-linear-fullq", "darcy-sin", "limit-sin", "limit-sin-general"};
}

ManufacturedCase manufactured_case(const std::string& name) {
  if (name == "darcy-linear") return darcy_linear(false);
  if (name == "darcy-linear-fullq") return darcy_linear(true);
  if (name == "darcy-sin") return darcy_sin();
  if (name == "limit-sin") return limit_sin(name, 1.0, 1.0, 1.0, 0.0, 0.0);
  if (name == "limit-sin-general") return limit_sin(name, 4.0, 1.0, 0.5, 0.3, 2.0);
  throw Error(ErrorCode::InvalidArgument, "unknown manufactured case '" + name + "'");
}

double strong_form_residual(const ManufacturedCase& mc) {
  const CoefficientSet& c = mc.coeffs;
  const Tensor2& Q = c.Q;
  const double W = mc.domain.porous_width;
  const double D = mc.domain.porous_depth;
  constexpr int S = 9;
  double r = 0.0;
  auto bump = [&r](double v) { r = std::max(r, std::abs(v)); };

  for (int a = 0; a <= S; ++a) {
    for (int b = 0; b <= S; ++b) {
      const double x = W * a / S;
      const double y = -D + D * b / S;
      const Grad2 p = grad(mc.p1, x, y);
      const Grad2 vx = grad(mc.vx, x, y);
      const Grad2 vy = grad(mc.vy, x, y);
      bump(Q.a11 * vx.v + Q.a12 * vy.v + p.dx);
      bump(Q.a21 * vx.v + Q.a22 * vy.v + p.dy);
      bump(vx.dx + vy.dy - mc.h1(HD(x), HD(y)).v);
      const bool drained_side = a == 0 || a == S || b == 0;
      if (mc.kind != CaseKind::DarcyDirichlet && drained_side) bump(p.v);
      if (mc.kind == CaseKind::DarcyNoFlowTop && b == S) bump(vy.v);
    }
  }
  if (mc.kind == CaseKind::Limit) {
    const double s11 = sqrt_Q(c).a11;
    for (int a = 0; a <= S; ++a) {
      const double x = W * a / S;
      const HD u = mc.u(HD(x, 1, 1, 0));
      const HD p2 = mc.p2(HD(x, 1, 0, 0));
      const double vn = mc.vy(HD(x), HD(0.0)).v;
      const double p1 = mc.p1(HD(x), HD(0.0)).v;
      bump(p1 - p2.v - (c.mu + c.alpha) * vn);
      bump(u.d1 - vn);
      bump(c.beta * s11 * u.v - c.mu * u.d12 + p2.d1 - mc.fbar(HD(x)).v);
    }
    bump(mc.u(HD(0.0)).v);
    bump(mc.u(HD(W)).v);
  }
  return r;
}

MmsLevel solve_manufactured(const ManufacturedCase& mc, Index n, const SolverOptions& opt) {
  const auto [g, layout] = build_grids(mc.domain, n, n, 2);
  (void)layout;
  MmsLevel lvl;
  lvl.n = n;
  lvl.h = g.dx;
  auto val = [](const ManufacturedCase::Field2& f, double x, double y) { return f(HD(x), HD(y)).v; };

  Vector v1, p1;
  if (mc.kind == CaseKind::Limit) {
    LimitForcing lf;
    lf.fbar_T = [&mc](double x) { return mc.fbar(HD(x)).v; };
    lf.h1 = [&mc](double x, double y) { return mc.h1(HD(x), HD(y)).v; };
    const LimitSystem ls = assemble_limit(mc.coeffs, lf, g);
    const LimitSolution sol = solve_limit(ls, opt);
    v1 = sol.v1;
    p1 = sol.p1;
    double eu = 0.0, ep2 = 0.0;
    for (Index i = 1; i < g.nx; ++i) eu += std::pow(sol.vT2[i] - mc.u(HD(g.x_node(i))).v, 2) * g.dx;
    for (Index i = 0; i < g.nx; ++i) ep2 += std::pow(sol.p2[i] - mc.p2(HD(g.x_center(i))).v, 2) * g.dx;
    lvl.errors["vT2"] = std::sqrt(eu);
    lvl.errors["p2"] = std::sqrt(ep2);
  } else {
    const bool no_flow_top = mc.kind == CaseKind::DarcyNoFlowTop;
    const PorousDofMap pm = standalone_porous_map(g, no_flow_top);
    const CellDofMap cm = standalone_cell_map(g);
    SaddleSystem sys;
    sys.A = assemble_darcy_mass(mc.coeffs, g, pm);
    sys.B = assemble_divergence(g, pm, cm);
    sys.f.assign(pm.dim, 0.0);
    // boundary pressure g enters as -g (w.n) |face|
    auto boundary = [&](Index dof, double gval, double sign, double len) {
      if (dof != kEliminated) sys.f[dof] -= gval * sign * len;
    };
    for (Index j = 0; j < g.ny; ++j) {
      boundary(pm.vertical[g.vface(0, j)], val(mc.p1, 0.0, g.y_center(j)), -1.0, g.dy);
      boundary(pm.vertical[g.vface(g.nx, j)], val(mc.p1, g.spec.porous_width, g.y_center(j)), 1.0, g.dy);
    }
    for (Index i = 0; i < g.nx; ++i) {
      boundary(pm.horizontal[g.hface(i, 0)], val(mc.p1, g.x_center(i), -g.spec.porous_depth), -1.0, g.dx);
      boundary(pm.horizontal[g.hface(i, g.ny)], val(mc.p1, g.x_center(i), 0.0), 1.0, g.dx);
    }
    sys.h.assign(cm.dim, 0.0);
    for (Index j = 0; j < g.ny; ++j)
      for (Index i = 0; i < g.nx; ++i) sys.h[cm.cells[g.cell(i, j)]] = val(mc.h1, g.x_center(i), g.y_center(j)) * g.cell_area();
    const SaddleSolution sol = schur_solve(sys, opt);
    v1.assign(g.n_vfaces() + g.n_hfaces(), 0.0);
    for (Index f = 0; f < g.n_vfaces(); ++f) v1[f] = sol.v[pm.vertical[f]];
    for (Index f = 0; f < g.n_hfaces(); ++f)
      if (pm.horizontal[f] != kEliminated) v1[g.n_vfaces() + f] = sol.v[pm.horizontal[f]];
    p1 = sol.p;
  }

  double ep = 0.0;
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 0; i < g.nx; ++i)
      ep += std::pow(p1[g.cell(i, j)] - val(mc.p1, g.x_center(i), g.y_center(j)), 2) * g.cell_area();
  lvl.errors["p1"] = std::sqrt(ep);

  // face-lumped L2 velocity error
  Vector dv(v1.size());
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 0; i <= g.nx; ++i)
      dv[g.vface(i, j)] = v1[g.vface(i, j)] - val(mc.vx, g.x_node(i), g.y_center(j));
  for (Index j = 0; j <= g.ny; ++j)
    for (Index i = 0; i < g.nx; ++i)
      dv[g.n_vfaces() + g.hface(i, j)] = v1[g.n_vfaces() + g.hface(i, j)] - val(mc.vy, g.x_center(i), g.y_node(j));
  const SparseSym M = assemble_weighted_mass(Tensor2::identity(), g, standalone_porous_map(g, false));
  lvl.errors["v1"] = std::sqrt(M.quadratic_form(dv));
  return lvl;
}

MmsTable mms_convergence(const ManufacturedCase& mc, const std::vector<Index>& levels, const SolverOptions& opt) {
  const double res = strong_form_residual(mc);
  if (!(res <= 1e-10)) {
    throw Error(ErrorCode::OracleFailure,
                "manufactured case '" + mc.name + "' fails its strong form, residual " + std::to_string(res));
  }
  MmsTable t;
  t.name = mc.name;
  for (Index n : levels) t.levels.push_back(solve_manufactured(mc, n, opt));
  if (t.levels.empty()) return t;
  for (const auto& [field, _] : t.levels.front().errors) {
    std::vector<double> h, e;
    for (const auto& l : t.levels) {
      h.push_back(l.h);
      e.push_back(l.errors.at(field));
    }
    t.orders[field] = fit_rate(h, e);
  }
  return t;
}

}  // namespace thinflow
