#include "sphdesign/design_criteria.hpp"

#include "sphdesign/error.hpp"
#include "sphdesign/parallel.hpp"
#include "sphdesign/specfun.hpp"
#include "sphdesign/summation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace sphdesign {

const char* to_string(PsiKind kind) {
  switch (kind) {
    case PsiKind::psi1: return "psi1";
    case PsiKind::psi2: return "psi2";
    case PsiKind::psi3: return "psi3";
  }
  return "?";
}

PsiKind parse_psi_kind(const std::string& name) {
  std::string s;
  for (char ch : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (s == "psi1" || s == "1") return PsiKind::psi1;
  if (s == "psi2" || s == "2") return PsiKind::psi2;
  if (s == "psi3" || s == "3") return PsiKind::psi3;
  throw Error(ErrorCode::invalid_parameter, "unknown psi kind '" + name + "'");
}

namespace {

double ipow(double z, int n) {
  double r = 1.0;
  for (; n > 0; n >>= 1) {
    if (n & 1) r *= z;
    z *= z;
  }
  return r;
}

double a0_psi1(int d, int t) {
  if (d == 2) return t % 2 ? 1.0 / t : 1.0 / (t + 1);
  const double alpha = 0.5 * (d - 2);
  const double pre = std::lgamma(alpha + 1.5) - 0.5 * std::log(std::numbers::pi);
  if (t % 2) return std::exp(pre + log_gamma_ratio(0.5 * t, alpha + 1.0 + 0.5 * t));
  return std::exp(pre + log_gamma_ratio(0.5 * (t + 1), alpha + 1.5 + 0.5 * t));
}

// Constant term of ((1+z)/2)^t and of P_t^{(alpha+1,alpha)}; both coincide.
double a0_psi23(int d, int t) {
  if (d == 2) return 1.0 / (t + 1);
  const double alpha = 0.5 * (d - 2);
  return std::exp(std::log(2.0) - 0.5 * std::log(std::numbers::pi) + 2.0 * alpha * std::log(2.0) +
                  std::lgamma(alpha + 1.5) + log_gamma_ratio(alpha + 1.0 + t, 2.0 * alpha + 2.0 + t));
}

}  // namespace

PsiSpec make_psi(PsiKind kind, int d, int t) {
  if (d < 2) throw Error(ErrorCode::invalid_dimension, "psi criteria need d >= 2");
  if (t < 1) throw Error(ErrorCode::invalid_degree, "psi criteria need t >= 1");
  PsiSpec s;
  s.kind = kind;
  s.d = d;
  s.t = t;
  const double alpha = 0.5 * (d - 2);
  switch (kind) {
    case PsiKind::psi1:
      s.a0 = a0_psi1(d, t);
      s.psi_at_1 = 2.0;
      s.value_at_1 = 2.0 - s.a0;
      break;
    case PsiKind::psi2:
      s.a0 = a0_psi23(d, t);
      s.psi_at_1 = 1.0;
      s.value_at_1 = 1.0 - s.a0;
      break;
    case PsiKind::psi3: {
      s.a0 = a0_psi23(d, t);
      const double p1 = d == 2 ? t + 1.0 : jacobi_at_one(alpha + 1.0, t);
      s.psi_at_1 = p1 - 1.0;
      s.value_at_1 = p1 - s.a0;
      break;
    }
  }
  return s;
}

double psi_eval(const PsiSpec& s, double z) {
  switch (s.kind) {
    case PsiKind::psi1: return ipow(z, s.t - 1) + ipow(z, s.t) - s.a0;
    case PsiKind::psi2: return ipow(0.5 * (1.0 + z), s.t) - s.a0;
    case PsiKind::psi3: {
      const double alpha = 0.5 * (s.d - 2);
      return jacobi_eval({alpha + 1.0, alpha, s.t}, z) - s.a0;
    }
  }
  return 0.0;
}

double psi_deriv(const PsiSpec& s, double z) {
  const int t = s.t;
  switch (s.kind) {
    case PsiKind::psi1: return (t >= 2 ? (t - 1) * ipow(z, t - 2) : 0.0) + t * ipow(z, t - 1);
    case PsiKind::psi2: return 0.5 * t * ipow(0.5 * (1.0 + z), t - 1);
    case PsiKind::psi3: {
      const double alpha = 0.5 * (s.d - 2);
      return jacobi_deriv({alpha + 1.0, alpha, t}, z);
    }
  }
  return 0.0;
}

namespace {

// Multiplies sum_l c_l P_l by (u + v z) in place, using
// z P_l = g_l P_{l+1} + (1 - g_l) P_{l-1} with g_l = (l+d-1)/(2l+d-1).
// Every term is nonnegative for u, v >= 0, so tiny coefficients keep full
// relative accuracy.
void multiply_linear(std::vector<double>& c, int d, double u, double v) {
  std::vector<double> out(c.size() + 1, 0.0);
  for (std::size_t l = 0; l < c.size(); ++l) {
    const double g = (l + d - 1.0) / (2.0 * l + d - 1.0);
    out[l] += u * c[l];
    out[l + 1] += v * g * c[l];
    if (l > 0) out[l - 1] += v * (1.0 - g) * c[l];
  }
  c = std::move(out);
}

}  // namespace

std::vector<double> legendre_coefficients(const PsiSpec& s) {
  std::vector<double> a;
  switch (s.kind) {
    case PsiKind::psi1: {
      std::vector<double> c{1.0};
      for (int k = 1; k < s.t; ++k) multiply_linear(c, s.d, 0.0, 1.0);
      a = c;  // z^{t-1}
      multiply_linear(c, s.d, 0.0, 1.0);
      a.resize(c.size(), 0.0);
      for (std::size_t l = 0; l < c.size(); ++l) a[l] += c[l];
      break;
    }
    case PsiKind::psi2:
      a = {1.0};
      for (int k = 0; k < s.t; ++k) multiply_linear(a, s.d, 0.5, 0.5);
      break;
    case PsiKind::psi3:
      // P_t^{(alpha+1,alpha)} = sum_l Z(d,l) a0 P^{(d+1)}_l
      a.resize(s.t + 1);
      for (int l = 0; l <= s.t; ++l) a[l] = s.a0 * static_cast<double>(dim_harmonic(s.d, l));
      break;
  }
  return a;
}

// ---------------------------------------------------------------------------
// Variational form

namespace {

void check_dim(const PointSet& x, const PsiSpec& s) {
  if (x.dim() != s.d)
    throw Error(ErrorCode::dimension_mismatch, "point set dimension " + std::to_string(x.dim()) +
                                                   " does not match psi dimension " + std::to_string(s.d));
}

// Sum over i < j of f(x_i . x_j): each row compensated, rows reduced by
// stable_sum, so the result is independent of the worker count.
template <class F>
double upper_pair_sum(const Eigen::MatrixXd& pts, F f) {
  const std::size_t n = static_cast<std::size_t>(pts.cols());
  std::vector<double> rows(n, 0.0);
  parallel_chunks(n, 16, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      CompensatedSum s;
      for (std::size_t j = i + 1; j < n; ++j) s.add(f(pts.col(i).dot(pts.col(j))));
      rows[i] = s.value();
    }
  });
  return stable_sum(rows);
}

double assemble(double n, double diag, double off) {
  CompensatedSum s;
  s.add(n * diag);
  s.add(2.0 * off);
  return s.value() / (n * n);
}

}  // namespace

double variational_value(const PointSet& x, const PsiSpec& spec) {
  check_dim(x, spec);
  const Eigen::MatrixXd pts = x.all_points();
  const double off = upper_pair_sum(pts, [&](double z) { return psi_eval(spec, z); });
  return assemble(static_cast<double>(pts.cols()), spec.value_at_1, off);
}

double variational_value_even(const PointSet& x, const PsiSpec& spec) {
  check_dim(x, spec);
  auto even = [&](double z) { return 0.5 * (psi_eval(spec, z) + psi_eval(spec, -z)); };
  const double diag = 0.5 * (spec.value_at_1 + psi_eval(spec, -1.0));
  // For [Y, -Y] every stored pair appears four times with the same even value.
  const Eigen::MatrixXd pts = x.symmetric() ? x.stored() : x.all_points();
  return assemble(static_cast<double>(pts.cols()), diag, upper_pair_sum(pts, even));
}

Eigen::MatrixXd variational_cartesian_gradient(const PointSet& x, const PsiSpec& spec) {
  check_dim(x, spec);
  const Eigen::MatrixXd pts = x.all_points();
  const Eigen::Index n = pts.cols();
  const Eigen::Index dim = pts.rows();
  const double scale = 2.0 / (static_cast<double>(n) * n);
  Eigen::MatrixXd g(dim, n);
  parallel_chunks(static_cast<std::size_t>(n), 16, [&](std::size_t b, std::size_t e) {
    std::vector<CompensatedSum> acc(dim);
    for (std::size_t k = b; k < e; ++k) {
      std::fill(acc.begin(), acc.end(), CompensatedSum{});
      for (Eigen::Index i = 0; i < n; ++i) {
        if (i == static_cast<Eigen::Index>(k)) continue;
        const double w = psi_deriv(spec, pts.col(i).dot(pts.col(k)));
        for (Eigen::Index r = 0; r < dim; ++r) acc[r].add(w * pts(r, i));
      }
      for (Eigen::Index r = 0; r < dim; ++r) g(r, k) = scale * acc[r].value();
    }
  });
  if (!x.symmetric()) return g;
  const Eigen::Index m = x.stored_size();
  return g.leftCols(m) - g.rightCols(m);
}

std::pair<double, Eigen::VectorXd> variational_value_and_gradient(const ParamVector& p,
                                                                  const PsiSpec& spec) {
  const PointSet x = param_to_points(p);
  const double v = variational_value(x, spec);
  const Eigen::MatrixXd g = variational_cartesian_gradient(x, spec);
  const Eigen::MatrixXd phi = unpack_angles(p);
  Eigen::VectorXd grad(p.length());
  for (int j = 0; j < p.stored_points(); ++j) {
    const int k = ParamVector::free_angles(p.dim(), j);
    if (k == 0) continue;
    const Eigen::MatrixXd jac = angles_jacobian(phi.col(j));
    grad.segment(ParamVector::offset(p.dim(), j), k) = jac.leftCols(k).transpose() * g.col(j);
  }
  return {v, grad};
}

// ---------------------------------------------------------------------------
// Weyl sums on S^2

Eigen::Index weyl_row_offset(int l, bool even_only) {
  if (!even_only) return static_cast<Eigen::Index>(l) * l - 1;
  const Eigen::Index q = l / 2 - 1;  // even degrees 2..l-2 precede l
  return 2 * q * (q + 1) + q;
}

Eigen::Index weyl_row_count(int t, bool even_only) {
  if (!even_only) return static_cast<Eigen::Index>(t + 1) * (t + 1) - 1;
  const Eigen::Index q = t / 2;
  return 2 * q * (q + 1) + q;
}

namespace {

void check_weyl(int d, int t) {
  if (d != 2) throw Error(ErrorCode::unsupported_dimension, "Weyl sums are provided for d = 2 only");
  if (t < 1 || t > kMaxHarmonicDegree) throw Error(ErrorCode::invalid_degree, "degree must be in [1, 2000]");
}

// Kernel index and degree of every residual row.
struct RowLayout {
  std::vector<Eigen::Index> source;
  std::vector<int> degree;
};

RowLayout row_layout(int t, bool even_only) {
  RowLayout rl;
  for (int l = 1; l <= t; ++l) {
    if (even_only && l % 2) continue;
    for (int k = 0; k <= 2 * l; ++k) {
      rl.source.push_back(static_cast<Eigen::Index>(l) * l + k);
      rl.degree.push_back(l);
    }
  }
  return rl;
}

struct PointAngles {
  Eigen::VectorXd c, s, phi2;
};

PointAngles chart_angles(const Eigen::MatrixXd& pts) {
  PointAngles a;
  const Eigen::Index n = pts.cols();
  a.c.resize(n);
  a.s.resize(n);
  a.phi2.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    a.c(j) = pts(0, j);
    a.s(j) = std::hypot(pts(1, j), pts(2, j));
    a.phi2(j) = (pts(1, j) == 0.0 && pts(2, j) == 0.0) ? 0.0 : std::atan2(pts(2, j), pts(1, j));
  }
  return a;
}

// r_row = sum_j factor_row * Y_row(x_j), optionally filling Jacobian columns
// for points that own free angles. Chunk partials are combined pairwise.
void accumulate(int t, const RowLayout& rl, const std::vector<double>& factor, const PointAngles& a,
                Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
  const std::size_t n = static_cast<std::size_t>(a.c.size());
  const std::size_t m = rl.source.size();
  const std::size_t full = static_cast<std::size_t>(t + 1) * (t + 1);
  const std::size_t chunks = (n + kReductionBlock - 1) / kReductionBlock;
  Eigen::MatrixXd partial = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                                  static_cast<Eigen::Index>(chunks));
  parallel_chunks(n, kReductionBlock, [&](std::size_t b, std::size_t e) {
    std::vector<CompensatedSum> acc(m);
    std::vector<double> v(full), d1, d2;
    if (jac) {
      d1.resize(full);
      d2.resize(full);
    }
    for (std::size_t j = b; j < e; ++j) {
      int free = 0;
      if (jac) free = ParamVector::free_angles(2, static_cast<int>(j));
      harmonics_s2_kernel(t, a.c(j), a.s(j), a.phi2(j), v.data(), free > 0 ? d1.data() : nullptr,
                          free > 1 ? d2.data() : nullptr);
      for (std::size_t row = 0; row < m; ++row)
        if (factor[row] != 0.0) acc[row].add(factor[row] * v[rl.source[row]]);
      if (free == 0) continue;
      const Eigen::Index col = ParamVector::offset(2, static_cast<int>(j));
      for (std::size_t row = 0; row < m; ++row) {
        (*jac)(row, col) = factor[row] * d1[rl.source[row]];
        if (free > 1) (*jac)(row, col + 1) = factor[row] * d2[rl.source[row]];
      }
    }
    for (std::size_t row = 0; row < m; ++row)
      partial(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(b / kReductionBlock)) =
          acc[row].value();
  });
  r.resize(static_cast<Eigen::Index>(m));
  std::vector<double> buf(chunks);
  for (std::size_t row = 0; row < m; ++row) {
    for (std::size_t c = 0; c < chunks; ++c)
      buf[c] = partial(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c));
    r(static_cast<Eigen::Index>(row)) = pairwise_sum(buf);
  }
}

}  // namespace

Eigen::VectorXd weyl_weights(int t, bool even_only, const std::vector<double>& a) {
  if (static_cast<int>(a.size()) < t + 1)
    throw Error(ErrorCode::invalid_parameter, "need degree coefficients a_0..a_t");
  const RowLayout rl = row_layout(t, even_only);
  Eigen::VectorXd w(static_cast<Eigen::Index>(rl.degree.size()));
  for (std::size_t i = 0; i < rl.degree.size(); ++i) {
    const int l = rl.degree[i];
    if (!(a[l] > 0.0)) throw Error(ErrorCode::invalid_parameter, "weights must be strictly positive");
    w(static_cast<Eigen::Index>(i)) = a[l] / (2.0 * l + 1.0);
  }
  return w;
}

Eigen::VectorXd weyl_weights(int t, bool even_only, const PsiSpec* psi) {
  if (psi == nullptr || psi->kind == PsiKind::psi3) {
    const double a0 = make_psi(PsiKind::psi3, 2, t).a0;
    return Eigen::VectorXd::Constant(weyl_row_count(t, even_only), a0);
  }
  if (psi->d != 2 || psi->t != t)
    throw Error(ErrorCode::dimension_mismatch, "psi must be for d = 2 and the same degree");
  return weyl_weights(t, even_only, legendre_coefficients(*psi));
}

WeylResidual weyl_residual(const PointSet& x, int t, bool even_only) {
  check_weyl(x.dim(), t);
  const RowLayout rl = row_layout(t, even_only);
  // Antipodal pairs give 2 Y for even degree; only that shortcut uses the
  // stored half, the general path sums over every point.
  const bool half = even_only && x.symmetric();
  const Eigen::MatrixXd pts = half ? x.stored() : x.all_points();
  std::vector<double> factor(rl.source.size(), half ? 2.0 : 1.0);
  WeylResidual out;
  out.t = t;
  out.n_points = x.size();
  out.even_only = even_only;
  accumulate(t, rl, factor, chart_angles(pts), out.r, nullptr);
  out.weights = weyl_weights(t, even_only);
  return out;
}

WeylSystem weyl_system(const ParamVector& p, int t, bool even_only, bool with_jacobian) {
  check_weyl(p.dim(), t);
  const RowLayout rl = row_layout(t, even_only);
  std::vector<double> factor(rl.source.size(), 1.0);
  if (p.symmetric())
    for (std::size_t i = 0; i < factor.size(); ++i) factor[i] = rl.degree[i] % 2 ? 0.0 : 2.0;
  // Angles are taken straight from p so that the sign of sin(phi_1) follows
  // the iterate even outside [0, pi].
  const Eigen::MatrixXd phi = unpack_angles(p);
  PointAngles a;
  a.c = phi.row(0).array().cos().transpose();
  a.s = phi.row(0).array().sin().transpose();
  a.phi2 = phi.row(1).transpose();
  WeylSystem sys;
  sys.residual.t = t;
  sys.residual.n_points = p.size_points();
  sys.residual.even_only = even_only;
  if (with_jacobian)
    sys.jacobian = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rl.source.size()), p.length());
  accumulate(t, rl, factor, a, sys.residual.r, with_jacobian ? &sys.jacobian : nullptr);
  sys.residual.weights = weyl_weights(t, even_only);
  return sys;
}

Eigen::MatrixXd weyl_jacobian(const ParamVector& p, int t) {
  return weyl_system(p, t, p.symmetric()).jacobian;
}

Eigen::MatrixXd weyl_jacobian(const PointSet& x, int t) {
  return weyl_jacobian(points_to_param(normalize_pointset(x).points), t);
}

}  // namespace sphdesign
