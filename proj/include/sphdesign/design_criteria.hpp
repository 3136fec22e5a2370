#pragma once

#include "sphdesign/sphere_core.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace sphdesign {

enum class PsiKind { psi1, psi2, psi3 };

const char* to_string(PsiKind kind);
PsiKind parse_psi_kind(const std::string& name);

/// Zonal polynomial psi(z) = sum_{l>=1} a_l P^{(d+1)}_l(z) with a_l > 0.
///
/// `psi_at_1` is the conventional normalization constant (2, 1, or
/// P_t^{(alpha+1,alpha)}(1) - 1); `value_at_1` is the exact value psi(1),
/// i.e. the sum of the a_l over l >= 1, and is what V's diagonal uses.
struct PsiSpec {
  PsiKind kind = PsiKind::psi1;
  int d = 2;
  int t = 1;
  double a0 = 0.0;
  double psi_at_1 = 0.0;
  double value_at_1 = 0.0;
};

PsiSpec make_psi(PsiKind kind, int d, int t);
double psi_eval(const PsiSpec& spec, double z);
double psi_deriv(const PsiSpec& spec, double z);

/// a_0 .. a_t in the normalized Legendre basis (a_0 is the removed constant).
std::vector<double> legendre_coefficients(const PsiSpec& spec);

/// V = (1/N^2) sum_i sum_j psi(x_i . x_j), summed in a fixed order.
double variational_value(const PointSet& x, const PsiSpec& spec);

/// V with the odd-degree part of psi dropped. For antipodal sets this equals
/// V and needs only the stored half.
double variational_value_even(const PointSet& x, const PsiSpec& spec);

/// dV/dx for each stored point, (d+1) x stored_size(). For symmetric sets the
/// antipode's contribution is folded in, so this is the gradient with respect
/// to the stored representatives.
Eigen::MatrixXd variational_cartesian_gradient(const PointSet& x, const PsiSpec& spec);

/// V and dV/dphi for a packed parameter vector.
std::pair<double, Eigen::VectorXd> variational_value_and_gradient(const ParamVector& p,
                                                                  const PsiSpec& spec);

/// Weyl sums r_{l,k} = sum_j Y_{l,k}(x_j) for l = 1..t on S^2.
///
/// With `even_only`, rows of odd degree are left out; for antipodal sets the
/// remaining sums are taken as twice the sum over the stored half.
struct WeylResidual {
  int t = 0;
  int n_points = 0;
  bool even_only = false;
  Eigen::VectorXd r;
  /// a_l / Z(2,l) per row; psi_3 gives the constant a_0.
  Eigen::VectorXd weights;

  double rTr() const { return r.squaredNorm(); }
  double rTDr() const { return r.dot(weights.cwiseProduct(r)); }
  double max_abs() const { return r.size() ? r.cwiseAbs().maxCoeff() : 0.0; }
};

/// Number of Weyl-sum rows for degree t on S^2.
Eigen::Index weyl_row_count(int t, bool even_only);
/// First row of degree l.
Eigen::Index weyl_row_offset(int l, bool even_only);

/// Row weights a_l / Z(2,l) for the given psi (default psi_3: constant a_0).
Eigen::VectorXd weyl_weights(int t, bool even_only, const PsiSpec* psi = nullptr);
/// Row weights from explicit degree coefficients a_1..a_t (a_l at index l).
Eigen::VectorXd weyl_weights(int t, bool even_only, const std::vector<double>& degree_coefficients);

WeylResidual weyl_residual(const PointSet& x, int t, bool even_only = false);

/// Residual and its Jacobian with respect to the packed angles of `p`.
/// Antipodal parameter sets contribute 2 Y to even rows and 0 to odd rows.
struct WeylSystem {
  WeylResidual residual;
  Eigen::MatrixXd jacobian;  // m x n, empty unless requested
};
WeylSystem weyl_system(const ParamVector& p, int t, bool even_only, bool with_jacobian = true);

/// Jacobian of the Weyl sums with respect to the packed angles; rows for odd
/// degrees are dropped for symmetric sets.
Eigen::MatrixXd weyl_jacobian(const ParamVector& p, int t);
/// Normalizes `x` first, then differentiates with respect to its packing.
Eigen::MatrixXd weyl_jacobian(const PointSet& x, int t);

}  // namespace sphdesign
