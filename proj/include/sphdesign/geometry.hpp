#pragma once

#include "sphdesign/sphere_core.hpp"

#include <Eigen/Dense>

#include <vector>

namespace sphdesign {

/// Minimum pairwise geodesic distance (twice the packing radius).
double separation(const PointSet& x);

struct MeshNormResult {
  double h = 0.0;            // attained at `argmax`, so h <= h_true
  double accuracy = 0.0;     // h_true <= h + accuracy
  Eigen::VectorXd argmax;
  bool reached = true;       // false when the cell cap stopped refinement early
  long cells = 0;
};

/// Covering radius max_y min_j dist(y, x_j), by branch-and-bound over the
/// cells of the cube-sphere. Each cell is bounded above by its center value
/// plus the largest angle from its center to a corner. The best point found is
/// finally snapped onto the point equidistant from its nearest generators.
MeshNormResult mesh_norm(const PointSet& x, double accuracy = 1e-6, long max_cells = 20'000'000);

struct GeometryReport {
  double delta = 0.0;
  double h = 0.0;
  double rho = 0.0;
  double h_accuracy = 0.0;
  double rho_low = 0.0;
  double rho_high = 0.0;
};

GeometryReport mesh_ratio(const PointSet& x, double accuracy = 1e-6);

/// Pairwise inner products x_i . x_j, i < j.
struct InnerProductSet {
  std::vector<double> all;       // sorted ascending, with repeats
  std::vector<double> values;    // distinct values (cluster means)
  std::vector<long> counts;      // multiplicity of each distinct value
};

InnerProductSet inner_product_set(const PointSet& x, double dedup = 1e-9);

/// Multiset equality of inner products within `tol`; equal sets mean the
/// configurations agree up to an orthogonal map.
bool same_inner_products(const PointSet& a, const PointSet& b, double tol = 1e-8);

/// sum_{i<j} |x_i - x_j|^{-s}.
double riesz_energy(const PointSet& x, double s);

}  // namespace sphdesign
