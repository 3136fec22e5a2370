#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sphdesign {

inline constexpr double kUnitTolerance = 1e-12;

/// N points on S^d, stored as the columns of a (d+1) x M matrix.
///
/// A symmetric (antipodal) set stores only its M = N/2 representatives;
/// the remaining points are their negations, in the same order, so that the
/// full set is [X, -X].
class PointSet {
 public:
  PointSet() = default;

  /// Takes ownership of `coords` ((d+1) x M). Every column must be unit norm
  /// within kUnitTolerance.
  PointSet(Eigen::MatrixXd coords, bool symmetric = false);

  /// Builds a set from row-major point coordinates.
  static PointSet from_rows(const std::vector<std::vector<double>>& rows, bool symmetric = false);

  int dim() const { return static_cast<int>(coords_.rows()) - 1; }
  int ambient_dim() const { return static_cast<int>(coords_.rows()); }
  /// Total number of points (including implied antipodes).
  int size() const { return static_cast<int>(coords_.cols()) * (symmetric_ ? 2 : 1); }
  int stored_size() const { return static_cast<int>(coords_.cols()); }
  bool symmetric() const { return symmetric_; }

  /// Stored representatives, (d+1) x stored_size().
  const Eigen::MatrixXd& stored() const { return coords_; }

  /// All N points as columns of a (d+1) x N matrix.
  Eigen::MatrixXd all_points() const;
  Eigen::VectorXd point(int i) const;

  /// Same points with the symmetric flag dropped.
  PointSet expanded() const;

 private:
  Eigen::MatrixXd coords_;
  bool symmetric_ = false;
};

/// Free spherical angles of a normalized point set, packed point by point:
/// point j (1-based, among the stored representatives) contributes its first
/// min(j-1, d) angles.
class ParamVector {
 public:
  ParamVector() = default;
  ParamVector(int d, int n_points, bool symmetric, Eigen::VectorXd values);

  int dim() const { return d_; }
  int size_points() const { return n_points_; }
  bool symmetric() const { return symmetric_; }
  int stored_points() const { return symmetric_ ? n_points_ / 2 : n_points_; }

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }
  Eigen::Index length() const { return values_.size(); }

  /// Number of free angles for a stored point set of M points on S^d.
  static Eigen::Index count(int d, int stored_points);
  /// Offset of the first free angle of stored point j (0-based).
  static Eigen::Index offset(int d, int j);
  /// Number of free angles of stored point j (0-based).
  static int free_angles(int d, int j) { return std::min(j, d); }

  /// Per-entry bounds: [0, pi] for colatitude angles, [0, 2pi] for phi_d.
  Eigen::VectorXd lower_bounds() const;
  Eigen::VectorXd upper_bounds() const;
  /// True for entries that are the periodic final angle phi_d.
  std::vector<bool> periodic_mask() const;

 private:
  int d_ = 0;
  int n_points_ = 0;
  bool symmetric_ = false;
  Eigen::VectorXd values_;
};

struct Normalized {
  PointSet points;
  Eigen::MatrixXd rotation;  // Y = rotation^T X
};

double surface_area(int d);

double geodesic_dist(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y);

/// Cartesian coordinates of a point from its d spherical angles.
Eigen::VectorXd angles_to_point(const Eigen::Ref<const Eigen::VectorXd>& phi);
/// Spherical angles of a unit vector; phi_d is wrapped to [0, 2pi).
Eigen::VectorXd point_to_angles(const Eigen::Ref<const Eigen::VectorXd>& x);
/// Jacobian d x / d phi, (d+1) x d.
Eigen::MatrixXd angles_jacobian(const Eigen::Ref<const Eigen::VectorXd>& phi);

/// Full d x M angle array of a parameter vector (fixed entries are zero).
Eigen::MatrixXd unpack_angles(const ParamVector& p);

PointSet param_to_points(const ParamVector& p);
ParamVector points_to_param(const PointSet& x);

/// True when the stored points already satisfy the normalization pattern.
bool is_normalized(const PointSet& x, double tol = kUnitTolerance);

/// Rotates (and possibly reflects) the stored points so that the (d+1) x M
/// matrix is upper triangular with nonnegative diagonal.
Normalized normalize_pointset(const PointSet& x);

/// Header of a point-set file: `# d=<d> N=<N> t=<t> sym=<0|1>`.
struct PointSetHeader {
  std::optional<int> d;
  std::optional<int> n;
  std::optional<int> t;
  bool symmetric = false;
};

struct LoadedPointSet {
  PointSet points;
  PointSetHeader header;
  std::vector<std::string> warnings;
};

/// Reads a point-set file. `expected_d` (or the header's d) fixes the row
/// width. Rows off the unit sphere by at most 1e-8 are renormalized and
/// reported in `warnings`; larger deviations are invalid-point errors.
LoadedPointSet read_pointset_file(const std::string& path, std::optional<int> expected_d = {});
PointSet read_pointset(const std::string& path, std::optional<int> expected_d = {});

/// Writes all N points with 17 significant digits. Symmetric sets are written
/// as [X, -X] with sym=1 in the header.
void write_pointset(const PointSet& x, const std::string& path, std::optional<int> t = {});

}  // namespace sphdesign
