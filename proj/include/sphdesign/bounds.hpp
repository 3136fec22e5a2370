#pragma once

#include <cstdint>
#include <optional>

namespace sphdesign {

/// Delsarte-Goethals-Seidel lower bound on the size of a t-design on S^d.
std::uint64_t n_star(int d, int t);

/// Yudin's lower bound before rounding.
double yudin_bound(int d, int t);
/// Yudin's bound rounded up to an integer point count.
std::uint64_t n_plus(int d, int t);

/// Point count at which free angles first reach the number of conditions.
std::uint64_t n_hat(int d, int t);
/// Symmetric analogue of n_hat; t must be odd.
std::uint64_t n_bar(int d, int t);

/// D(d,t) / (d N).
double efficiency(int d, int t, std::uint64_t n);

/// Point count used for the reference designs on S^2: n_hat (or n_bar),
/// with the small-t exceptions where a smaller or larger design is known.
std::uint64_t reference_n(int d, int t, bool symmetric);

/// Number of least-squares conditions m: harmonics of degree 1..t, or of
/// even degree only for symmetric sets.
std::uint64_t condition_count(int d, int t, bool symmetric);
/// Number of free angles n for N points (N/2 stored when symmetric).
std::uint64_t variable_count(int d, std::uint64_t n_points, bool symmetric);

struct BoundsRow {
  int d = 2;
  int t = 1;
  std::uint64_t n_star = 0;
  std::uint64_t n_plus = 0;
  std::uint64_t n_hat = 0;
  std::optional<std::uint64_t> n_bar;  // odd t only
  std::uint64_t dim_poly = 0;

  double efficiency(std::uint64_t n) const;
};

BoundsRow bounds_row(int d, int t);

}  // namespace sphdesign
