#include "thinflow/saddle_solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace thinflow {

namespace {

using EigenSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

EigenSparse to_eigen_upper(const SparseSym& M) {
  std::vector<Eigen::Triplet<double, int>> t;
  for (const auto& e : M.triplets())
    t.emplace_back(static_cast<int>(e.row), static_cast<int>(e.col), e.value);
  EigenSparse out(static_cast<int>(M.dim()), static_cast<int>(M.dim()));
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, std::string(what) + " contains non-finite values");
}

}  // namespace

CgResult cg_solve(const LinearOperator& M, std::span<const double> rhs, double tol, Index cap, const Vector* x0,
                  bool log_energy) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "cg: tolerance must be positive");
  check_finite(rhs, "cg right-hand side");
  const std::size_t n = rhs.size();
  CgResult res;
  res.x = x0 ? *x0 : Vector(n, 0.0);
  if (res.x.size() != n) throw Error(ErrorCode::DimensionMismatch, "cg: initial guess has wrong size");

  Vector r(n), q(n), Ap(n);
  M(res.x, Ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - Ap[i];
  const double bnorm = norm2(rhs);
  if (bnorm == 0.0) {
    std::fill(res.x.begin(), res.x.end(), 0.0);
    return res;
  }
  Vector p = r;
  double rr = dot(r, r);
  double max_rq = 0.0;
  auto energy = [&] { return -0.5 * dot(res.x, r) - 0.5 * dot(rhs, res.x); };
  if (log_energy) res.energy.push_back(energy());

  while (std::sqrt(rr) > tol * bnorm) {
    if (res.iterations >= cap) {
      throw Error(ErrorCode::NonConvergence, "cg: iteration cap " + std::to_string(cap) + " reached, relative residual " +
                                                 std::to_string(std::sqrt(rr) / bnorm));
    }
    M(p, Ap);
    const double pAp = dot(p, Ap);
    const double pp = dot(p, p);
    if (!std::isfinite(pAp)) throw Error(ErrorCode::NonFinite, "cg: operator produced non-finite values");
    const double rq = pAp / pp;
    max_rq = std::max(max_rq, rq);
    if (!(rq > 1e-15 * max_rq)) throw Error(ErrorCode::SingularSystem, "cg: operator is singular or indefinite");
    const double a = rr / pAp;
    axpy(a, p, res.x);
    axpy(-a, Ap, r);
    const double rr_new = dot(r, r);
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + (rr_new / rr) * p[i];
    rr = rr_new;
    ++res.iterations;
    if (log_energy) res.energy.push_back(energy());
  }
  res.relative_residual = std::sqrt(rr) / bnorm;
  return res;
}

CgResult cg_solve(const SparseSym& M, std::span<const double> rhs, double tol, Index cap, const Vector* x0,
                  bool log_energy) {
  if (static_cast<Index>(rhs.size()) != M.dim()) throw Error(ErrorCode::DimensionMismatch, "cg: rhs size");
  return cg_solve([&M](std::span<const double> x, std::span<double> y) { M.multiply(x, y); }, rhs, tol, cap, x0,
                  log_energy);
}

// ------------------------------------------------------------------ inner

struct InnerInverse::Impl {
  const SparseSym* A = nullptr;
  SolverOptions opt;
  Eigen::SimplicialLDLT<EigenSparse, Eigen::Upper> ldlt;
};

InnerInverse::InnerInverse(const SparseSym& A, const SolverOptions& opt) : impl_(std::make_unique<Impl>()) {
  impl_->A = &A;
  impl_->opt = opt;
  if (opt.inner == InnerSolver::Cholesky && A.dim() > 0) {
    impl_->ldlt.compute(to_eigen_upper(A));
    if (impl_->ldlt.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "velocity block factorization failed");
    const auto d = impl_->ldlt.vectorD();
    if ((d.array() <= 0.0).any()) throw Error(ErrorCode::SingularSystem, "velocity block is not positive definite");
  }
}

InnerInverse::~InnerInverse() = default;

Vector InnerInverse::solve(std::span<const double> b) const {
  const Index n = impl_->A->dim();
  if (impl_->opt.inner == InnerSolver::Cholesky) {
    Eigen::Map<const Eigen::VectorXd> bm(b.data(), static_cast<Eigen::Index>(b.size()));
    Eigen::VectorXd x = impl_->ldlt.solve(bm);
    return Vector(x.data(), x.data() + x.size());
  }
  const Index cap = static_cast<Index>(std::ceil(impl_->opt.inner_cap_factor * static_cast<double>(n)));
  auto r = cg_solve(*impl_->A, b, impl_->opt.inner_tol, cap);
  inner_iterations_ += r.iterations;
  return std::move(r.x);
}

// ------------------------------------------------------------------ schur

double kkt_residual(const SaddleSystem& sys, std::span<const double> v, std::span<const double> p) {
  Vector r1 = sys.A * v;
  Vector btp(static_cast<std::size_t>(sys.n()));
  sys.B.multiply_transpose(p, btp);
  for (std::size_t i = 0; i < r1.size(); ++i) r1[i] -= btp[i] + sys.f[i];
  Vector r2 = sys.B * v;
  for (std::size_t i = 0; i < r2.size(); ++i) r2[i] -= sys.h[i];
  return (norm2(r1) + norm2(r2)) / (1.0 + norm2(sys.f) + norm2(sys.h));
}

SaddleSolution schur_solve(const SparseSym& A, const SparseMatrix& B, std::span<const double> f,
                           std::span<const double> h, const SolverOptions& opt, const Vector* p0) {
  const Index n = A.dim();
  const Index m = B.rows();
  if (B.cols() != n || static_cast<Index>(f.size()) != n || static_cast<Index>(h.size()) != m) {
    throw Error(ErrorCode::DimensionMismatch, "schur_solve: block sizes disagree");
  }
  check_finite(f, "velocity right-hand side");
  check_finite(h, "pressure right-hand side");

  InnerInverse inv(A, opt);
  SaddleSolution sol;
  if (m == 0) {
    sol.v = inv.solve(f);
    sol.inner_iterations = inv.inner_iterations();
    return sol;
  }

  Vector tmp(static_cast<std::size_t>(n));
  LinearOperator S = [&](std::span<const double> q, std::span<double> out) {
    B.multiply_transpose(q, tmp);
    const Vector w = inv.solve(tmp);
    B.multiply(w, out);
  };
  const Index cap = static_cast<Index>(std::ceil(opt.outer_cap_factor * static_cast<double>(m)));

  // (B A^-1 B^T) p = h - B A^-1 f, then v = A^-1 (f + B^T p)
  auto pass = [&](std::span<const double> ff, std::span<const double> hh, const Vector* start, Vector& v, Vector& p) {
    const Vector Ainv_f = inv.solve(ff);
    Vector rhs = B * Ainv_f;
    for (Index i = 0; i < m; ++i) rhs[i] = hh[i] - rhs[i];
    CgResult outer = cg_solve(S, rhs, opt.outer_tol, cap, start);
    p = std::move(outer.x);
    Vector g(ff.begin(), ff.end());
    B.multiply_transpose(p, tmp);
    for (Index i = 0; i < n; ++i) g[i] += tmp[i];
    v = inv.solve(g);
    return outer.iterations;
  };
  sol.outer_iterations = pass(f, h, p0, sol.v, sol.p);

  // one step of iterative refinement; the outer tolerance is relative, so
  // ill-conditioned pressures keep ~cond*tol error without it
  Vector rf(f.begin(), f.end()), rh(h.begin(), h.end());
  Vector Av(static_cast<std::size_t>(n));
  A.multiply(sol.v, Av);
  B.multiply_transpose(sol.p, tmp);
  for (Index i = 0; i < n; ++i) rf[i] -= Av[i] - tmp[i];
  const Vector Bv = B * sol.v;
  for (Index i = 0; i < m; ++i) rh[i] -= Bv[i];
  if (norm_max(rf) > 0.0 || norm_max(rh) > 0.0) {
    Vector dv, dp;
    sol.outer_iterations += pass(rf, rh, nullptr, dv, dp);
    for (Index i = 0; i < n; ++i) sol.v[i] += dv[i];
    for (Index i = 0; i < m; ++i) sol.p[i] += dp[i];
  }
  sol.inner_iterations = inv.inner_iterations();

  SaddleSystem view{A, B, Vector(f.begin(), f.end()), Vector(h.begin(), h.end())};
  sol.kkt_residual = kkt_residual(view, sol.v, sol.p);
  return sol;
}

SaddleSolution schur_solve(const SaddleSystem& sys, const SolverOptions& opt, const Vector* p0) {
  return schur_solve(sys.A, sys.B, sys.f, sys.h, opt, p0);
}

// ------------------------------------------------------------------ inf-sup

InfSupReport estimate_inf_sup(const SparseMatrix& B, const SparseSym& gram, std::span<const double> pressure_mass) {
  const Index n = gram.dim();
  const Index m = B.rows();
  if (B.cols() != n || static_cast<Index>(pressure_mass.size()) != m) {
    throw Error(ErrorCode::DimensionMismatch, "estimate_inf_sup: sizes disagree");
  }
  InfSupReport rep;
  if (m == 0) return rep;

  // [G B^T; B 0] [w; y] = [0; r]  gives  y = -(B G^-1 B^T)^-1 r.
  std::vector<Eigen::Triplet<double, int>> t;
  for (const auto& e : gram.triplets()) {
    t.emplace_back(int(e.row), int(e.col), e.value);
    if (e.row != e.col) t.emplace_back(int(e.col), int(e.row), e.value);
  }
  for (const auto& e : B.triplets()) {
    t.emplace_back(int(n + e.row), int(e.col), e.value);
    t.emplace_back(int(e.col), int(n + e.row), e.value);
  }
  EigenSparse K(int(n + m), int(n + m));
  K.setFromTriplets(t.begin(), t.end());
  K.makeCompressed();
  Eigen::SparseLU<EigenSparse> lu;
  lu.compute(K);
  if (lu.info() != Eigen::Success) {
    // B G^-1 B^T is singular: the inf-sup constant is zero
    return rep;
  }

  Eigen::VectorXd q(m), rhs = Eigen::VectorXd::Zero(n + m);
  for (Index i = 0; i < m; ++i) q[i] = 1.0 + 0.25 * std::sin(0.7 * static_cast<double>(i) + 0.3);
  Eigen::Map<const Eigen::VectorXd> mp(pressure_mass.data(), m);
  auto mnorm = [&](const Eigen::VectorXd& x) { return std::sqrt(x.dot(mp.cwiseProduct(x))); };
  q /= mnorm(q);

  double lambda = 0.0;
  constexpr Index cap = 500;
  for (Index it = 1; it <= cap; ++it) {
    rhs.tail(m) = mp.cwiseProduct(q);
    Eigen::VectorXd sol = lu.solve(rhs);
    Eigen::VectorXd x = -sol.tail(m);
    // Rayleigh quotient x.Sx / x.Mx with Sx = M q
    const double num = x.dot(mp.cwiseProduct(q));
    const double mx = mnorm(x);
    const double next = num / (mx * mx);
    if (!std::isfinite(next)) throw Error(ErrorCode::NonFinite, "inf-sup iteration produced non-finite values");
    q = x / mx;
    rep.iterations = it;
    rep.last_change = std::abs(next - lambda) / std::abs(next);
    lambda = next;
    if (it > 1 && rep.last_change <= 1e-8) {
      rep.eigenvalue = lambda;
      rep.constant = std::sqrt(std::max(lambda, 0.0));
      return rep;
    }
  }
  throw Error(ErrorCode::NonConvergence, "inf-sup inverse iteration did not converge in 500 steps");
}

}  // namespace thinflow
