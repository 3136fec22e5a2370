#pragma once

#include "sphdesign/sphere_core.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace sphdesign {

/// Exact binomial coefficient; throws overflow instead of wrapping.
std::uint64_t binomial(int n, int k);

/// Z(d, l): dimension of the degree-l spherical harmonics on S^d.
std::uint64_t dim_harmonic(int d, int l);

/// D(d, t) = sum_{l <= t} Z(d, l) = Z(d+1, t).
std::uint64_t dim_poly(int d, int t);

/// log Gamma(a) - log Gamma(b), for positive arguments.
double log_gamma_ratio(double a, double b);

struct JacobiParams {
  double alpha = 0.0;
  double beta = 0.0;
  int degree = 0;
};

/// P_l^{(alpha,beta)}(z) by the three-term recurrence.
double jacobi_eval(const JacobiParams& p, double z);
/// P_0 .. P_L at z in one pass.
std::vector<double> jacobi_eval_all(double alpha, double beta, int max_degree, double z);
/// d/dz P_l^{(alpha,beta)}(z) = (l + alpha + beta + 1)/2 P_{l-1}^{(alpha+1,beta+1)}(z).
double jacobi_deriv(const JacobiParams& p, double z);
/// P_l^{(alpha,beta)}(1) = Gamma(l+alpha+1) / (Gamma(l+1) Gamma(alpha+1)).
double jacobi_at_one(double alpha, int l);

/// Normalized Legendre (Gegenbauer) polynomial P^{(d+1)}_l with value 1 at z = 1.
double legendre_norm(int d, int l, double z);
double legendre_norm_deriv(int d, int l, double z);

/// Largest zero of P_n^{(alpha,beta)}: top eigenvalue of the Jacobi matrix,
/// then a Newton polish on the polynomial.
double jacobi_largest_zero(double alpha, double beta, int n);

/// n-point Gauss-Jacobi rule for the weight (1-z)^alpha (1+z)^beta,
/// weights normalized to sum to 1.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_jacobi(int n, double alpha, double beta);

/// Real spherical harmonics on S^2, orthonormal for the normalized surface
/// measure, in the coordinates x_1 = cos(phi_1), (x_2, x_3) = sin(phi_1) (cos phi_2, sin phi_2).
///
/// Rows are ordered by degree l ascending; inside degree l the 2l+1 rows are
/// sin(k phi_2) for k = l..1, then the zonal term, then cos(k phi_2) for k = 1..l.
struct HarmonicBasisEval {
  int max_degree = 0;
  bool include_degree0 = false;
  Eigen::MatrixXd values;  // rows: harmonics, cols: points

  /// Row of Y_{l,k}, k = 1..2l+1.
  Eigen::Index row(int l, int k) const { return harmonic_row(l, k, include_degree0); }
  static Eigen::Index harmonic_row(int l, int k, bool include_degree0) {
    return static_cast<Eigen::Index>(l) * l + (k - 1) - (include_degree0 ? 0 : 1);
  }
};

HarmonicBasisEval sph_harmonics_s2(int max_degree, const PointSet& x, bool include_degree0);

/// Partial derivatives of every harmonic (degree >= 1) with respect to the two
/// spherical angles of each point, taken in the chart of the point itself.
struct HarmonicJacobian {
  int max_degree = 0;
  Eigen::MatrixXd d_phi1;
  Eigen::MatrixXd d_phi2;
};

HarmonicJacobian sph_harmonics_s2_jacobian(int max_degree, const PointSet& x);

/// Per-point kernel shared by the design criteria: writes all (L+1)^2 values
/// (degree 0 included) for angles with cos(phi_1) = c, sin(phi_1) = s (signed).
/// `d_phi1` / `d_phi2` may be null.
void harmonics_s2_kernel(int max_degree, double c, double s, double phi2, double* values,
                         double* d_phi1, double* d_phi2);

inline constexpr int kMaxHarmonicDegree = 2000;

}  // namespace sphdesign
