#include "sphdesign/specfun.hpp"

#include "sphdesign/error.hpp"
#include "sphdesign/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace sphdesign {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (r > std::numeric_limits<std::uint64_t>::max())
      throw Error(ErrorCode::overflow, "binomial(" + std::to_string(n) + "," + std::to_string(k) + ")");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t dim_harmonic(int d, int l) {
  if (d < 1) throw Error(ErrorCode::invalid_dimension, "dim_harmonic needs d >= 1");
  if (l < 0) throw Error(ErrorCode::invalid_degree, "dim_harmonic needs l >= 0");
  if (l == 0) return 1;
  // homogeneous polynomials of degree l in d+1 variables minus those of degree l-2
  return binomial(l + d, d) - binomial(l + d - 2, d);
}

std::uint64_t dim_poly(int d, int t) {
  if (d < 1) throw Error(ErrorCode::invalid_dimension, "dim_poly needs d >= 1");
  if (t < 0) throw Error(ErrorCode::invalid_degree, "dim_poly needs t >= 0");
  return dim_harmonic(d + 1, t);
}

double log_gamma_ratio(double a, double b) { return std::lgamma(a) - std::lgamma(b); }

// ---------------------------------------------------------------------------
// Jacobi polynomials

namespace {

void check_jacobi(double alpha, double beta) {
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw Error(ErrorCode::invalid_parameter, "Jacobi parameters must exceed -1");
}

}  // namespace

std::vector<double> jacobi_eval_all(double alpha, double beta, int max_degree, double z) {
  check_jacobi(alpha, beta);
  if (max_degree < 0) throw Error(ErrorCode::invalid_degree, "negative degree");
  std::vector<double> p(max_degree + 1);
  p[0] = 1.0;
  if (max_degree == 0) return p;
  const double ab = alpha + beta;
  p[1] = (alpha + 1.0) + 0.5 * (ab + 2.0) * (z - 1.0);
  for (int n = 1; n < max_degree; ++n) {
    const double c = 2.0 * n + ab;
    const double a1 = 2.0 * (n + 1) * (n + ab + 1.0) * c;
    const double a2 = (c + 1.0) * (alpha * alpha - beta * beta);
    const double a3 = c * (c + 1.0) * (c + 2.0);
    const double a4 = 2.0 * (n + alpha) * (n + beta) * (c + 2.0);
    p[n + 1] = ((a2 + a3 * z) * p[n] - a4 * p[n - 1]) / a1;
  }
  return p;
}

double jacobi_eval(const JacobiParams& p, double z) {
  check_jacobi(p.alpha, p.beta);
  if (p.degree < 0) throw Error(ErrorCode::invalid_degree, "negative degree");
  if (p.degree == 0) return 1.0;
  const double alpha = p.alpha, beta = p.beta, ab = alpha + beta;
  double p0 = 1.0;
  double p1 = (alpha + 1.0) + 0.5 * (ab + 2.0) * (z - 1.0);
  for (int n = 1; n < p.degree; ++n) {
    const double c = 2.0 * n + ab;
    const double a1 = 2.0 * (n + 1) * (n + ab + 1.0) * c;
    const double a2 = (c + 1.0) * (alpha * alpha - beta * beta);
    const double a3 = c * (c + 1.0) * (c + 2.0);
    const double a4 = 2.0 * (n + alpha) * (n + beta) * (c + 2.0);
    const double p2 = ((a2 + a3 * z) * p1 - a4 * p0) / a1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double jacobi_deriv(const JacobiParams& p, double z) {
  check_jacobi(p.alpha, p.beta);
  if (p.degree == 0) return 0.0;
  return 0.5 * (p.degree + p.alpha + p.beta + 1.0) *
         jacobi_eval({p.alpha + 1.0, p.beta + 1.0, p.degree - 1}, z);
}

double jacobi_at_one(double alpha, int l) {
  return std::exp(std::lgamma(l + alpha + 1.0) - std::lgamma(l + 1.0) - std::lgamma(alpha + 1.0));
}

double legendre_norm(int d, int l, double z) {
  if (d < 2) throw Error(ErrorCode::invalid_dimension, "normalized Legendre needs d >= 2");
  const double alpha = 0.5 * (d - 2);
  return jacobi_eval({alpha, alpha, l}, z) / jacobi_at_one(alpha, l);
}

double legendre_norm_deriv(int d, int l, double z) {
  if (d < 2) throw Error(ErrorCode::invalid_dimension, "normalized Legendre needs d >= 2");
  if (l <= 0) return 0.0;
  // slope at z = 1 is l (l + d - 1) / d; P^{(d+3)}_{l-1} carries the shape
  return l * (l + d - 1.0) / d * legendre_norm(d + 2, l - 1, z);
}

namespace {

// Symmetric tridiagonal Jacobi matrix of the monic recurrence.
void jacobi_matrix(int n, double alpha, double beta, Eigen::VectorXd& diag, Eigen::VectorXd& sub) {
  diag.resize(n);
  sub.resize(std::max(n - 1, 0));
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double c = 2.0 * k + ab;
    if (k == 0)
      diag(k) = (beta - alpha) / (ab + 2.0);
    else
      diag(k) = (beta * beta - alpha * alpha) / (c * (c + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double c = 2.0 * k + ab;
    double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
    double den = c * c * (c + 1.0) * (c - 1.0);
    sub(k - 1) = std::sqrt(num / den);
  }
}

}  // namespace

double jacobi_largest_zero(double alpha, double beta, int n) {
  check_jacobi(alpha, beta);
  if (n < 1) throw Error(ErrorCode::no_zero, "P_0 has no zeros");
  Eigen::VectorXd diag, sub;
  jacobi_matrix(n, alpha, beta, diag, sub);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  double z = eig.eigenvalues()(n - 1);
  for (int it = 0; it < 3; ++it) {
    const double f = jacobi_eval({alpha, beta, n}, z);
    const double df = jacobi_deriv({alpha, beta, n}, z);
    if (df == 0.0) break;
    const double step = f / df;
    if (!std::isfinite(step) || std::abs(step) > 1e-6) break;
    z -= step;
    if (std::abs(step) <= 1e-17) break;
  }
  return std::min(z, 1.0);
}

GaussRule gauss_jacobi(int n, double alpha, double beta) {
  check_jacobi(alpha, beta);
  if (n < 1) throw Error(ErrorCode::invalid_parameter, "Gauss rule needs n >= 1");
  Eigen::VectorXd diag, sub;
  jacobi_matrix(n, alpha, beta, diag, sub);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = eig.eigenvalues()(i);
    const double v = eig.eigenvectors()(0, i);
    rule.weights[i] = v * v;
    total += rule.weights[i];
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

// ---------------------------------------------------------------------------
// Spherical harmonics on S^2

namespace {

inline std::size_t tri(int l, int k) {
  return static_cast<std::size_t>(l) * (l + 1) / 2 + static_cast<std::size_t>(k);
}

// Recurrence factors for Q_l^k = sqrt((l-k)!/(l+k)!) P_l^k (no Condon-Shortley phase):
//   Q_k^k     = sqrt((2k-1)/(2k)) s Q_{k-1}^{k-1}
//   Q_{k+1}^k = sqrt(2k+1) c Q_k^k
//   Q_l^k     = a(l,k) c Q_{l-1}^k - b(l,k) Q_{l-2}^k
struct SchmidtFactors {
  int max_degree = -1;
  std::vector<double> a, b, diag;

  void ensure(int L) {
    if (L <= max_degree) return;
    a.assign(tri(L, L) + 1, 0.0);
    b.assign(tri(L, L) + 1, 0.0);
    diag.assign(L + 1, 1.0);
    for (int k = 1; k <= L; ++k) diag[k] = std::sqrt((2.0 * k - 1.0) / (2.0 * k));
    for (int k = 0; k <= L; ++k) {
      for (int l = k + 2; l <= L; ++l) {
        const double r = std::sqrt(static_cast<double>(l - k) * (l + k));
        a[tri(l, k)] = (2.0 * l - 1.0) / r;
        b[tri(l, k)] = std::sqrt(static_cast<double>(l - 1 - k) * (l - 1 + k)) / r;
      }
    }
    max_degree = L;
  }
};

constexpr int kRescaleExp = 400;

}  // namespace

void harmonics_s2_kernel(int L, double c, double s, double phi2, double* values, double* d_phi1,
                         double* d_phi2) {
  thread_local SchmidtFactors f;
  thread_local std::vector<double> q, cosk, sink;
  f.ensure(L);
  q.resize(tri(L, L) + 1);
  cosk.resize(L + 1);
  sink.resize(L + 1);

  // Seeds are tracked as mantissa * 2^exponent so that high orders near the
  // poles underflow only in the final result, not inside the recurrence.
  double seed_m = 1.0;
  int seed_e = 0;
  for (int k = 0; k <= L; ++k) {
    if (k > 0) {
      seed_m *= s * f.diag[k];
      if (seed_m != 0.0) {
        int ex = 0;
        seed_m = std::frexp(seed_m, &ex);
        seed_e += ex;
      }
    }
    int e = seed_e;
    auto store = [&](int l, double m) {
      q[tri(l, k)] = e == 0 ? m : std::ldexp(m, e);
    };
    double m0 = seed_m;
    store(k, m0);
    if (k + 1 > L) continue;
    double m1 = std::sqrt(2.0 * k + 1.0) * c * m0;
    store(k + 1, m1);
    for (int l = k + 2; l <= L; ++l) {
      double m2 = f.a[tri(l, k)] * c * m1 - f.b[tri(l, k)] * m0;
      if (e < 0 && std::abs(m2) > std::ldexp(1.0, kRescaleExp)) {
        m2 = std::ldexp(m2, -kRescaleExp);
        m1 = std::ldexp(m1, -kRescaleExp);
        e += kRescaleExp;
      }
      store(l, m2);
      m0 = m1;
      m1 = m2;
    }
  }

  for (int k = 1; k <= L; ++k) {
    cosk[k] = std::cos(k * phi2);
    sink[k] = std::sin(k * phi2);
  }

  for (int l = 0; l <= L; ++l) {
    const std::size_t base = static_cast<std::size_t>(l) * l;
    const double norm0 = std::sqrt(2.0 * l + 1.0);
    const double normk = std::numbers::sqrt2 * norm0;
    values[base + l] = norm0 * q[tri(l, 0)];
    for (int k = 1; k <= l; ++k) {
      const double v = normk * q[tri(l, k)];
      values[base + l - k] = v * sink[k];
      values[base + l + k] = v * cosk[k];
    }
    if (d_phi1) {
      const double dq0 = l >= 1 ? -std::sqrt(static_cast<double>(l) * (l + 1)) * q[tri(l, 1)] : 0.0;
      d_phi1[base + l] = norm0 * dq0;
      for (int k = 1; k <= l; ++k) {
        double dq = std::sqrt(static_cast<double>(l + k) * (l - k + 1)) * q[tri(l, k - 1)];
        if (k < l) dq -= std::sqrt(static_cast<double>(l - k) * (l + k + 1)) * q[tri(l, k + 1)];
        dq *= 0.5 * normk;
        d_phi1[base + l - k] = dq * sink[k];
        d_phi1[base + l + k] = dq * cosk[k];
      }
    }
    if (d_phi2) {
      d_phi2[base + l] = 0.0;
      for (int k = 1; k <= l; ++k) {
        const double v = normk * k * q[tri(l, k)];
        d_phi2[base + l - k] = v * cosk[k];
        d_phi2[base + l + k] = -v * sink[k];
      }
    }
  }
}

namespace {

void check_s2(int L, const PointSet& x) {
  if (x.dim() != 2) throw Error(ErrorCode::unsupported_dimension, "harmonic bases are provided for d = 2 only");
  if (L < 0 || L > kMaxHarmonicDegree)
    throw Error(ErrorCode::invalid_degree, "harmonic degree must be in [0, 2000]");
}

// Chart angles of a Cartesian point: c = cos(phi_1), s = sin(phi_1) >= 0.
void chart(const Eigen::Ref<const Eigen::VectorXd>& x, double& c, double& s, double& phi2) {
  c = x(0);
  s = std::hypot(x(1), x(2));
  phi2 = (x(1) == 0.0 && x(2) == 0.0) ? 0.0 : std::atan2(x(2), x(1));
}

}  // namespace

HarmonicBasisEval sph_harmonics_s2(int L, const PointSet& x, bool include_degree0) {
  check_s2(L, x);
  const Eigen::MatrixXd pts = x.all_points();
  const Eigen::Index full = static_cast<Eigen::Index>(L + 1) * (L + 1);
  const Eigen::Index skip = include_degree0 ? 0 : 1;
  HarmonicBasisEval out;
  out.max_degree = L;
  out.include_degree0 = include_degree0;
  out.values.resize(full - skip, pts.cols());
  parallel_for(pts.cols(), [&](std::size_t j) {
    std::vector<double> buf(full);
    double c, s, phi2;
    chart(pts.col(j), c, s, phi2);
    harmonics_s2_kernel(L, c, s, phi2, buf.data(), nullptr, nullptr);
    for (Eigen::Index r = skip; r < full; ++r) out.values(r - skip, j) = buf[r];
  });
  return out;
}

HarmonicJacobian sph_harmonics_s2_jacobian(int L, const PointSet& x) {
  check_s2(L, x);
  const Eigen::MatrixXd pts = x.all_points();
  const Eigen::Index full = static_cast<Eigen::Index>(L + 1) * (L + 1);
  HarmonicJacobian out;
  out.max_degree = L;
  out.d_phi1.resize(full - 1, pts.cols());
  out.d_phi2.resize(full - 1, pts.cols());
  parallel_for(pts.cols(), [&](std::size_t j) {
    std::vector<double> v(full), d1(full), d2(full);
    double c, s, phi2;
    chart(pts.col(j), c, s, phi2);
    harmonics_s2_kernel(L, c, s, phi2, v.data(), d1.data(), d2.data());
    for (Eigen::Index r = 1; r < full; ++r) {
      out.d_phi1(r - 1, j) = d1[r];
      out.d_phi2(r - 1, j) = d2[r];
    }
  });
  return out;
}

}  // namespace sphdesign
