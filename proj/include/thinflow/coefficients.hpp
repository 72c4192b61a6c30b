#pragma once

#include <string>
#include <vector>

#include "thinflow/geometry.hpp"
#include "thinflow/types.hpp"

namespace thinflow {

struct Tensor2 {
  double a11 = 1.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 1.0;

  static Tensor2 identity() { return {}; }
  static Tensor2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

  Tensor2 operator*(const Tensor2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
  }
  double max_abs_diff(const Tensor2& o) const;

  bool operator==(const Tensor2&) const = default;
};

struct CoefficientSet {
  Tensor2 Q;
  double mu = 1.0;
  double alpha = 0.0;
  double beta = 1.0;

  bool operator==(const CoefficientSet&) const = default;
};

// Smallest eigenvalue of Q, after checking symmetry, ellipticity and the
// signs of mu, alpha, beta.
double validate(const CoefficientSet& c);

// Symmetric positive definite square root of Q.
Tensor2 sqrt_Q(const CoefficientSet& c);

// Forcing presets:
//   zero           everything 0
//   constant       f2 = (f2_T, f2_N), h1 = h1
//   eps-perturbed  constant + eps * g, g_T = perturbation x z, g_N = perturbation x,
//                  h1 + eps * perturbation x
//   smooth         f2_T sin(pi x/W), f2_N sin(pi x/W) z, h1 sin(pi x/W) cos(pi y/(2D))
struct ForcingSet {
  std::string preset = "constant";
  double f2_T = 1.0;
  double f2_N = 0.0;
  double h1 = 0.0;
  double perturbation = 0.0;

  bool operator==(const ForcingSet&) const = default;
};

bool is_known_preset(const std::string& name);

// Point evaluation on reference coordinates. epsilon = 0 gives the limit data.
double forcing_fT(const ForcingSet& fs, const DomainSpec& d, double epsilon, double x, double z);
double forcing_fN(const ForcingSet& fs, const DomainSpec& d, double epsilon, double x, double z);
double forcing_h1(const ForcingSet& fs, const DomainSpec& d, double epsilon, double x, double y);

// Face/cell samples in local grid numbering.
struct DiscreteForcing {
  Vector fT;  // channel tangential faces, size (nx+1) nz
  Vector fN;  // channel normal faces, size nx (nz+1)
  Vector h1;  // porous cells, size nx ny
};

DiscreteForcing forcing_at(const ForcingSet& fs, const GridPair& g, double epsilon);

}  // namespace thinflow
