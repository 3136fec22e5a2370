#include "sphdesign/quadrature.hpp"

#include "sphdesign/design_criteria.hpp"
#include "sphdesign/error.hpp"
#include "sphdesign/summation.hpp"

#include <cmath>
#include <limits>

namespace sphdesign {

double integrate(const PointSet& x, const std::function<double(const Eigen::VectorXd&)>& f) {
  const Eigen::MatrixXd pts = x.all_points();
  std::vector<double> v(static_cast<std::size_t>(pts.cols()));
  for (Eigen::Index j = 0; j < pts.cols(); ++j) v[static_cast<std::size_t>(j)] = f(pts.col(j));
  return stable_sum(v) / static_cast<double>(pts.cols());
}

namespace {

// Direct pair sums cost O(N^2 t); beyond this size V on S^2 is taken from
// the Weyl sums through the addition theorem instead.
constexpr int kDirectLimit = 5000;

double v_from_weyl(const WeylResidual& r, int t, PsiKind kind) {
  const PsiSpec spec = make_psi(kind, 2, t);
  const std::vector<double> a = legendre_coefficients(spec);
  CompensatedSum s;
  for (int l = 1; l <= t; ++l) {
    const Eigen::Index off = weyl_row_offset(l, false);
    const double w = a[l] / (2.0 * l + 1.0);
    for (int k = 0; k <= 2 * l; ++k) s.add(w * r.r(off + k) * r.r(off + k));
  }
  const double n = r.n_points;
  return s.value() / (n * n);
}

}  // namespace

DesignReport verify_design(const PointSet& x, int t_claimed, double tol, int t_max) {
  if (t_claimed < 1) throw Error(ErrorCode::invalid_degree, "claimed degree must be >= 1");
  if (t_max < 0) t_max = t_claimed;
  if (t_max < t_claimed) throw Error(ErrorCode::invalid_degree, "t_max must be >= t_claimed");
  if (!(tol > 0.0)) throw Error(ErrorCode::invalid_parameter, "tolerance must be positive");

  DesignReport rep;
  rep.d = x.dim();
  rep.n_points = x.size();
  rep.t_claimed = t_claimed;
  rep.t_max = t_max;
  rep.tolerance = tol;
  rep.degree_residual.assign(t_max, 0.0);
  const double n = x.size();

  if (x.dim() == 2) {
    const WeylResidual r = weyl_residual(x, t_max);
    double max_claimed = 0.0;
    CompensatedSum rtr;
    for (int l = 1; l <= t_max; ++l) {
      const Eigen::Index off = weyl_row_offset(l, false);
      double m = 0.0;
      for (int k = 0; k <= 2 * l; ++k) {
        const double v = r.r(off + k);
        m = std::max(m, std::abs(v));
        if (l <= t_claimed) rtr.add(v * v);
      }
      rep.degree_residual[l - 1] = m / n;
      if (l <= t_claimed) max_claimed = std::max(max_claimed, m / n);
    }
    rep.max_abs_weyl = max_claimed;
    rep.rTr = rtr.value();
    if (x.size() <= kDirectLimit) {
      rep.v_psi1 = variational_value(x, make_psi(PsiKind::psi1, 2, t_claimed));
      rep.v_psi2 = variational_value(x, make_psi(PsiKind::psi2, 2, t_claimed));
      rep.v_psi3 = variational_value(x, make_psi(PsiKind::psi3, 2, t_claimed));
    } else {
      WeylResidual rc = r;
      rc.t = t_claimed;
      rep.v_psi1 = v_from_weyl(rc, t_claimed, PsiKind::psi1);
      rep.v_psi2 = v_from_weyl(rc, t_claimed, PsiKind::psi2);
      rep.v_psi3 = v_from_weyl(rc, t_claimed, PsiKind::psi3);
    }
  } else {
    rep.max_abs_weyl = std::numeric_limits<double>::quiet_NaN();
    rep.rTr = std::numeric_limits<double>::quiet_NaN();
    for (int l = 1; l <= t_max; ++l) {
      const double v1 = variational_value(x, make_psi(PsiKind::psi1, x.dim(), l));
      const double v2 = variational_value(x, make_psi(PsiKind::psi2, x.dim(), l));
      const double v3 = variational_value(x, make_psi(PsiKind::psi3, x.dim(), l));
      rep.degree_residual[l - 1] = std::max({std::abs(v1), std::abs(v2), std::abs(v3)});
      if (l == t_claimed) {
        rep.v_psi1 = v1;
        rep.v_psi2 = v2;
        rep.v_psi3 = v3;
      }
    }
  }

  rep.exactness_degree = 0;
  while (rep.exactness_degree < t_max && rep.degree_residual[rep.exactness_degree] <= tol)
    ++rep.exactness_degree;
  rep.is_design = rep.exactness_degree >= t_claimed;
  return rep;
}

}  // namespace sphdesign
