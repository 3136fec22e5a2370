#pragma once

#include "sphdesign/design_criteria.hpp"
#include "sphdesign/geometry.hpp"
#include "sphdesign/sphere_core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sphdesign {

enum class StartKind { equal_area_spiral, random_uniform, symmetric_double };

/// Starting configurations. The spiral is the generalized (Fibonacci) spiral
/// on S^2; symmetric_double mirrors N/2 generated points through the origin.
PointSet initial_points(int d, int n, StartKind kind, std::uint64_t seed);

struct SolveOptions {
  int max_iterations = 5000;
  double gradient_tolerance = 1e-15;
  /// Design threshold for the variational form, relative to psi(1).
  double v_tol = 5e-15;
  /// Design threshold for r^T r, scaled by N^2.
  double r_tol_scale = 1e-22;
  double lm_nu0 = 1e-3;
  double lm_nu_increase = 10.0;
  double lm_nu_decrease = 0.3;
  double lm_nu_max = 1e20;
  /// A run above tolerance stops once `stall_window` accepted steps have
  /// lowered the objective by less than this relative amount.
  int stall_window = 30;
  double stall_decrease = 1e-4;
  int lbfgs_memory = 12;
  int restarts = 5;
  std::uint64_t seed = 1;
  /// Accuracy of the mesh norm attached to results.
  double geometry_accuracy = 1e-4;
};

enum class Classification { design, local_minimum };
const char* to_string(Classification c);

struct SolveResult {
  PointSet points;
  bool converged = false;
  Classification classification = Classification::local_minimum;
  std::string stop_reason;
  int iterations = 0;
  double v_psi1 = 0.0;
  double v_psi2 = 0.0;
  double v_psi3 = 0.0;
  double rTr = 0.0;  // NaN for d > 2
  std::optional<GeometryReport> geometry;
  /// Objective after every accepted step, starting with the initial value.
  std::vector<double> history;
  int restart = 0;
  int distinct_minima = 0;
};

/// Bound-constrained limited-memory quasi-Newton descent on V for the packed
/// angles of the normalized start.
SolveResult minimize_variational(const PointSet& x0, const PsiSpec& spec, const SolveOptions& opts = {});

/// Levenberg-Marquardt on the weighted Weyl residual (S^2 only). Weights are
/// a_l / Z(2,l); without explicit coefficients psi_3's constant a_0 is used.
/// With `symmetric` the start must be antipodal and only even degrees enter.
SolveResult solve_lsq(const PointSet& x0, int t, bool symmetric, const SolveOptions& opts = {},
                      const std::vector<double>* degree_coefficients = nullptr);

enum class Method { automatic, lm, grad };

struct GenerateRequest {
  int d = 2;
  int t = 1;
  std::optional<int> n;
  bool symmetric = false;
  Method method = Method::automatic;
  PsiKind psi = PsiKind::psi3;
  SolveOptions opts;
};

/// Multi-start pipeline: default N, starts, solve, classify, score. Returns
/// the design with the smallest mesh ratio, or the best local minimum.
SolveResult generate_design(const GenerateRequest& req);

}  // namespace sphdesign
