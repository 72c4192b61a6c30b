#include "thinflow/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace thinflow {

double Tensor2::max_abs_diff(const Tensor2& o) const {
  return std::max({std::abs(a11 - o.a11), std::abs(a12 - o.a12), std::abs(a21 - o.a21), std::abs(a22 - o.a22)});
}

double validate(const CoefficientSet& c) {
  const Tensor2& Q = c.Q;
  for (double v : {Q.a11, Q.a12, Q.a21, Q.a22, c.mu, c.alpha, c.beta}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "coefficient is not finite");
  }
  if (std::abs(Q.a12 - Q.a21) > 1e-12) throw Error(ErrorCode::NotSymmetric, "Q is not symmetric");
  const double off = 0.5 * (Q.a12 + Q.a21);
  const double mean = 0.5 * (Q.a11 + Q.a22);
  const double rad = std::hypot(0.5 * (Q.a11 - Q.a22), off);
  const double lmin = mean - rad;
  if (!(lmin > 0.0)) throw Error(ErrorCode::NotElliptic, "Q is not positive definite");
  if (!(c.mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
  if (c.alpha < 0.0) throw Error(ErrorCode::InvalidArgument, "alpha must be non-negative");
  if (c.beta < 0.0) throw Error(ErrorCode::InvalidArgument, "beta must be non-negative");
  return lmin;
}

Tensor2 sqrt_Q(const CoefficientSet& c) {
  validate(c);
  // For SPD 2x2: sqrt(Q) = (Q + s I) / t, s = sqrt(det Q), t = sqrt(tr Q + 2 s).
  const Tensor2& Q = c.Q;
  const double off = 0.5 * (Q.a12 + Q.a21);
  const double s = std::sqrt(Q.a11 * Q.a22 - off * off);
  const double t = std::sqrt(Q.a11 + Q.a22 + 2.0 * s);
  return {(Q.a11 + s) / t, off / t, off / t, (Q.a22 + s) / t};
}

bool is_known_preset(const std::string& name) {
  return name == "zero" || name == "constant" || name == "eps-perturbed" || name == "smooth";
}

namespace {

void check_preset(const ForcingSet& fs) {
  if (!is_known_preset(fs.preset)) throw Error(ErrorCode::UnknownPreset, "unknown forcing preset '" + fs.preset + "'");
}

constexpr double pi = std::numbers::pi;

}  // namespace

double forcing_fT(const ForcingSet& fs, const DomainSpec& d, double epsilon, double x, double z) {
  check_preset(fs);
  if (fs.preset == "zero") return 0.0;
  if (fs.preset == "smooth") return fs.f2_T * std::sin(pi * x / d.porous_width);
  double v = fs.f2_T;
  if (fs.preset == "eps-perturbed") v += epsilon * fs.perturbation * x * z;
  return v;
}

double forcing_fN(const ForcingSet& fs, const DomainSpec& d, double epsilon, double x, double z) {
  check_preset(fs);
  if (fs.preset == "zero") return 0.0;
  if (fs.preset == "smooth") return fs.f2_N * std::sin(pi * x / d.porous_width) * z;
  double v = fs.f2_N;
  if (fs.preset == "eps-perturbed") v += epsilon * fs.perturbation * x;
  return v;
}

double forcing_h1(const ForcingSet& fs, const DomainSpec& d, double epsilon, double x, double y) {
  check_preset(fs);
  if (fs.preset == "zero") return 0.0;
  if (fs.preset == "smooth")
    return fs.h1 * std::sin(pi * x / d.porous_width) * std::cos(pi * y / (2.0 * d.porous_depth));
  double v = fs.h1;
  if (fs.preset == "eps-perturbed") v += epsilon * fs.perturbation * x;
  return v;
}

DiscreteForcing forcing_at(const ForcingSet& fs, const GridPair& g, double epsilon) {
  check_preset(fs);
  if (!(epsilon >= 0.0)) throw Error(ErrorCode::InvalidArgument, "forcing_at: epsilon must be non-negative");
  DiscreteForcing out;
  out.fT.resize(g.n_tfaces());
  out.fN.resize(g.n_nfaces());
  out.h1.resize(g.n_cells());
  for (Index k = 0; k < g.nz; ++k)
    for (Index i = 0; i <= g.nx; ++i)
      out.fT[g.tface(i, k)] = forcing_fT(fs, g.spec, epsilon, g.x_node(i), g.z_center(k));
  for (Index k = 0; k <= g.nz; ++k)
    for (Index i = 0; i < g.nx; ++i)
      out.fN[g.nface(i, k)] = forcing_fN(fs, g.spec, epsilon, g.x_center(i), g.z_node(k));
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 0; i < g.nx; ++i)
      out.h1[g.cell(i, j)] = forcing_h1(fs, g.spec, epsilon, g.x_center(i), g.y_center(j));
  return out;
}

}  // namespace thinflow
