#include "sphdesign/bounds.hpp"

#include "sphdesign/error.hpp"
#include "sphdesign/specfun.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace sphdesign {

namespace {

void check(int d, int t, int t_min) {
  if (d < 1) throw Error(ErrorCode::invalid_dimension, "d must be >= 1");
  if (t < t_min) throw Error(ErrorCode::invalid_degree, "t must be >= " + std::to_string(t_min));
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

// Integral of sin^{d-1} over [0, theta] by composite Gauss-Legendre; the
// integrand is entire, so panels of 24 nodes converge to roundoff.
double sine_power_integral(int d, double theta) {
  if (d == 1) return theta;
  if (d == 2) return 1.0 - std::cos(theta);
  static const GaussRule rule = gauss_jacobi(24, 0.0, 0.0);
  auto panel = [&](double a, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i];
      s += rule.weights[i] * std::pow(std::sin(x), d - 1);
    }
    return s * (b - a);
  };
  double prev = panel(0.0, theta);
  for (int panels = 2; panels <= 1024; panels *= 2) {
    double s = 0.0;
    for (int k = 0; k < panels; ++k) s += panel(theta * k / panels, theta * (k + 1) / panels);
    if (std::abs(s - prev) <= 1e-14 * std::abs(s)) return s;
    prev = s;
  }
  return prev;
}

}  // namespace

std::uint64_t n_star(int d, int t) {
  check(d, t, 0);
  const int k = t / 2;
  if (t % 2) return 2 * binomial(d + k, d);
  return binomial(d + k, d) + binomial(d + k - 1, d);
}

double yudin_bound(int d, int t) {
  check(d, t, 1);
  const double alpha = 0.5 * (d - 2);
  const double gamma = jacobi_largest_zero(alpha + 1.0, alpha + 1.0, t);
  const double full = std::sqrt(std::numbers::pi) * std::exp(log_gamma_ratio(0.5 * d, 0.5 * (d + 1)));
  return full / sine_power_integral(d, std::acos(gamma));
}

std::uint64_t n_plus(int d, int t) {
  // The slack keeps an exact integer (t = 1 gives 2) from rounding up.
  return static_cast<std::uint64_t>(std::ceil(yudin_bound(d, t) - 1e-9));
}

std::uint64_t n_hat(int d, int t) {
  check(d, t, 1);
  const std::uint64_t du = static_cast<std::uint64_t>(d);
  return ceil_div(dim_poly(d, t) + du * (du + 1) / 2 - 1, du);
}

std::uint64_t n_bar(int d, int t) {
  check(d, t, 1);
  if (t % 2 == 0) throw Error(ErrorCode::invalid_degree, "symmetric counts are defined for odd t");
  const std::uint64_t du = static_cast<std::uint64_t>(d);
  return 2 * ceil_div(binomial(t + d - 1, d) - 1 + du * (du + 1) / 2, du);
}

double efficiency(int d, int t, std::uint64_t n) {
  check(d, t, 0);
  if (n < 1) throw Error(ErrorCode::invalid_parameter, "N must be >= 1");
  return static_cast<double>(dim_poly(d, t)) / (static_cast<double>(d) * static_cast<double>(n));
}

std::uint64_t reference_n(int d, int t, bool symmetric) {
  if (symmetric && t % 2 == 0) ++t;  // antipodal sets integrate odd degrees for free
  if (d != 2) return symmetric ? n_bar(d, t) : n_hat(d, t);
  if (!symmetric) {
    const std::uint64_t n = n_hat(d, t);
    return (t % 2 && t >= 3 && t <= 15) ? n - 1 : n;
  }
  // Antipodal pair, octahedron, icosahedron, and the degrees whose reference
  // designs sit two points off n_bar.
  static const std::map<int, std::uint64_t> known = {{1, 2}, {3, 6}, {5, 12}, {7, 32}, {11, 70}, {15, 120}};
  if (auto it = known.find(t); it != known.end()) return it->second;
  return n_bar(d, t);
}

std::uint64_t condition_count(int d, int t, bool symmetric) {
  check(d, t, 1);
  if (!symmetric) return dim_poly(d, t) - 1;
  std::uint64_t m = 0;
  for (int l = 2; l <= t; l += 2) m += dim_harmonic(d, l);
  return m;
}

std::uint64_t variable_count(int d, std::uint64_t n_points, bool symmetric) {
  if (symmetric && n_points % 2) throw Error(ErrorCode::invalid_parameter, "symmetric sets need even N");
  const std::uint64_t m = symmetric ? n_points / 2 : n_points;
  const std::uint64_t du = static_cast<std::uint64_t>(d);
  if (m <= du) return m * (m - 1) / 2;
  return m * du - du * (du + 1) / 2;
}

double BoundsRow::efficiency(std::uint64_t n) const { return sphdesign::efficiency(d, t, n); }

BoundsRow bounds_row(int d, int t) {
  BoundsRow row;
  row.d = d;
  row.t = t;
  row.n_star = n_star(d, t);
  row.n_plus = n_plus(d, t);
  row.n_hat = n_hat(d, t);
  if (t % 2) row.n_bar = n_bar(d, t);
  row.dim_poly = dim_poly(d, t);
  return row;
}

}  // namespace sphdesign
