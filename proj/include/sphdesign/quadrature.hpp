#pragma once

#include "sphdesign/sphere_core.hpp"

#include <functional>
#include <vector>

namespace sphdesign {

inline constexpr double kDesignTolerance = 1e-12;

/// Equal-weight rule (1/N) sum_j f(x_j).
double integrate(const PointSet& x, const std::function<double(const Eigen::VectorXd&)>& f);

struct DesignReport {
  int d = 2;
  int n_points = 0;
  int t_claimed = 0;
  int t_max = 0;
  double tolerance = kDesignTolerance;
  /// max |r_{l,k}| / N over degrees 1..t_claimed (S^2 only, NaN otherwise).
  double max_abs_weyl = 0.0;
  double v_psi1 = 0.0;
  double v_psi2 = 0.0;
  double v_psi3 = 0.0;
  /// Unscaled sum of squares of the Weyl sums up to t_claimed (S^2 only).
  double rTr = 0.0;
  bool is_design = false;
  /// Largest t' <= t_max such that every degree up to t' passes.
  int exactness_degree = 0;
  /// Per-degree statistic for degrees 1..t_max: max |r|/N on S^2, max |V| otherwise.
  std::vector<double> degree_residual;
};

/// Checks polynomial exactness up to `t_max` (defaults to t_claimed).
/// On S^2 degree l passes when max_k |r_{l,k}| / N <= tol; elsewhere degree
/// t' passes when all three V values for t' are within tol of zero.
DesignReport verify_design(const PointSet& x, int t_claimed, double tol = kDesignTolerance, int t_max = -1);

}  // namespace sphdesign
