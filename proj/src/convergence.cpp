#include "thinflow/convergence.hpp"

#include <cmath>
#include <limits>

namespace thinflow {

namespace {

Vector difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::GridMismatch, "fields live on different grids");
  Vector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

}  // namespace

std::optional<double> velocity_ratio(const EpsilonSolution& sol, const NormSuite& norms) {
  const double den = norms.l2_normal(sol.vN2);
  if (den < 1e-14) return std::nullopt;
  return norms.l2_tangential(sol.vT2) / den;
}

SweepRow compare_to_limit(const EpsilonSolution& es, const LimitSolution& ls, const NormSuite& norms) {
  const GridPair& g = norms.grid();
  if (es.vT2.size() != static_cast<std::size_t>(g.n_tfaces()) || ls.vT2.size() != static_cast<std::size_t>(g.nx + 1) ||
      es.v1.size() != ls.v1.size() || es.p1.size() != ls.p1.size() || ls.p2.size() != static_cast<std::size_t>(g.nx)) {
    throw Error(ErrorCode::GridMismatch, "compare_to_limit: solutions do not share the grid");
  }
  const double eps = es.epsilon;
  SweepRow row;
  row.epsilon = eps;

  const Vector dv1 = difference(es.v1, ls.v1);
  row.err_v1_hdiv = norms.hdiv(dv1);

  Vector dT(es.vT2.size());
  Vector epsT(es.vT2.size());
  for (Index k = 0; k < g.nz; ++k)
    for (Index i = 0; i <= g.nx; ++i) {
      const Index f = g.tface(i, k);
      epsT[f] = eps * es.vT2[f];
      dT[f] = epsT[f] - ls.vT2[i];
    }
  row.err_vT = norms.l2_tangential(dT) + norms.gradT_tangential(dT);
  row.err_dz_vT = norms.dz_tangential(epsT);

  row.err_vN_hdz = norms.hdz_normal(difference(es.vN2, ls.xi));
  row.err_p1 = norms.h1_pressure_surrogate(difference(es.p1, ls.p1), dv1);

  Vector dp2(es.p2.size());
  for (Index k = 0; k < g.nz; ++k)
    for (Index i = 0; i < g.nx; ++i) dp2[g.ccell(i, k)] = es.p2[g.ccell(i, k)] - ls.p2[i];
  row.err_p2 = norms.l2_channel_pressure(dp2);

  row.ratio_T_N = velocity_ratio(es, norms);
  row.vanish_dzvT = norms.dz_tangential(es.vT2);
  row.vanish_gradT_epsvN = eps * norms.gradT_normal(es.vN2);
  row.kkt_residual = es.kkt_residual;
  row.outer_iterations = es.outer_iterations;
  return row;
}

std::optional<RateFit> fit_rate(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) return std::nullopt;
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  RateFit fit;
  fit.rate = sxy / sxx;
  // a flat series is fitted exactly by slope 0
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

const std::vector<std::string>& sweep_rate_columns() {
  static const std::vector<std::string> cols = {"err_v1_hdiv", "err_vT",    "err_dz_vT",   "err_vN_hdz",
                                                "err_p1",      "err_p2",    "apriori_E",   "ratio_T_N",
                                                "vanish_dzvT", "vanish_gradT_epsvN"};
  return cols;
}

double sweep_column(const SweepRow& r, const std::string& name) {
  if (name == "epsilon") return r.epsilon;
  if (name == "err_v1_hdiv") return r.err_v1_hdiv;
  if (name == "err_vT") return r.err_vT;
  if (name == "err_dz_vT") return r.err_dz_vT;
  if (name == "err_vN_hdz") return r.err_vN_hdz;
  if (name == "err_p1") return r.err_p1;
  if (name == "err_p2") return r.err_p2;
  if (name == "energy_residual") return r.energy_residual;
  if (name == "apriori_E") return r.apriori_E;
  if (name == "ratio_T_N") return r.ratio_T_N.value_or(std::numeric_limits<double>::quiet_NaN());
  if (name == "vanish_dzvT") return r.vanish_dzvT;
  if (name == "vanish_gradT_epsvN") return r.vanish_gradT_epsvN;
  throw Error(ErrorCode::InvalidArgument, "unknown sweep column " + name);
}

ConvergenceReport run_sweep(const RunConfig& cfg) {
  for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
    if (!(cfg.epsilons[i] > 0.0 && cfg.epsilons[i] < 1.0) || (i > 0 && !(cfg.epsilons[i] < cfg.epsilons[i - 1]))) {
      throw Error(ErrorCode::InvalidArgument, "sweep: epsilons must be strictly decreasing in (0,1)");
    }
  }
  const auto [g, layout] = build_grids(cfg.geometry, cfg.nx, cfg.ny, cfg.nz);
  const NormSuite norms(g, cfg.coeffs);

  ConvergenceReport rep;
  const LimitSystem ls = assemble_limit(cfg.coeffs, cfg.forcing, g);
  rep.limit = solve_limit(ls, cfg.solver);
  rep.limit_pressure_identity = pressure_identity_residual(rep.limit, cfg.coeffs, g);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double eps : cfg.epsilons) {
    try {
      const EpsilonSystem es = assemble_epsilon(cfg.coeffs, cfg.forcing, g, layout, eps);
      const EpsilonSolution sol = solve_epsilon(es, cfg.solver);
      SweepRow row = compare_to_limit(sol, rep.limit, norms);
      row.energy_residual = energy_identity_residual(sol, es);
      row.apriori_E = apriori_quantities(sol, g).E;
      rep.rows.push_back(std::move(row));
    } catch (const Error& e) {
      SweepRow row;
      row.epsilon = eps;
      row.err_v1_hdiv = row.err_vT = row.err_dz_vT = row.err_vN_hdz = row.err_p1 = row.err_p2 = nan;
      row.energy_residual = row.apriori_E = row.vanish_dzvT = row.vanish_gradT_epsvN = nan;
      row.error = std::string(to_string(e.code())) + ": " + e.what();
      rep.rows.push_back(std::move(row));
    }
  }

  std::vector<double> x;
  for (const auto& r : rep.rows) x.push_back(r.epsilon);
  for (const auto& name : sweep_rate_columns()) {
    std::vector<double> y;
    for (const auto& r : rep.rows) y.push_back(sweep_column(r, name));
    if (auto fit = fit_rate(x, y)) rep.rates.push_back({name, *fit});
  }
  return rep;
}

double scaled_solution_norm(const EpsilonSolution& sol, const NormSuite& norms) {
  Vector epsT(sol.vT2.size());
  for (std::size_t i = 0; i < epsT.size(); ++i) epsT[i] = sol.epsilon * sol.vT2[i];
  return norms.hdiv(sol.v1) + norms.l2_tangential(epsT) + norms.gradT_tangential(epsT) + norms.hdz_normal(sol.vN2) +
         norms.l2_porous_pressure(sol.p1) + norms.l2_channel_pressure(sol.p2);
}

StabilityProbe stability_probe(const CoefficientSet& c, const ForcingSet& delta, const GridPair& g,
                               const DofLayout& layout, double epsilon, const SolverOptions& opt) {
  const NormSuite norms(g, c);
  const EpsilonSystem es = assemble_epsilon(c, delta, g, layout, epsilon);
  const EpsilonSolution sol = solve_epsilon(es, opt);

  // data norm from the sampled forcing fields
  const DiscreteForcing F = forcing_at(delta, g, epsilon);
  StabilityProbe out;
  out.data_norm = norms.l2_tangential(F.fT) + norms.l2_normal(F.fN) + norms.l2_porous_pressure(F.h1);
  out.solution_norm = scaled_solution_norm(sol, norms);
  out.ratio = out.data_norm > 0.0 ? out.solution_norm / out.data_norm : 0.0;
  return out;
}

}  // namespace thinflow
