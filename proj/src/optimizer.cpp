#include "sphdesign/optimizer.hpp"

#include "sphdesign/bounds.hpp"
#include "sphdesign/error.hpp"
#include "sphdesign/parallel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>

namespace sphdesign {

const char* to_string(Classification c) {
  return c == Classification::design ? "design-within-tolerance" : "local-minimum-positive";
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Eigen::MatrixXd spiral(int n) {
  Eigen::MatrixXd x(3, n);
  const double golden = std::numbers::pi * (1.0 + std::sqrt(5.0));
  for (int k = 0; k < n; ++k) {
    const double z = 1.0 - 2.0 * (k + 0.5) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double a = golden * k;
    x(0, k) = z;
    x(1, k) = r * std::cos(a);
    x(2, k) = r * std::sin(a);
  }
  return x;
}

Eigen::MatrixXd gaussian_columns(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(rows, cols);
  for (int j = 0; j < cols; ++j) {
    do {
      for (int i = 0; i < rows; ++i) x(i, j) = normal(rng);
    } while (x.col(j).norm() < 1e-8);
    x.col(j).normalize();
  }
  return x;
}

// Spiral with every point pushed by a Gaussian offset of about `scale` radians.
Eigen::MatrixXd jittered_spiral(int n, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x = spiral(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < 3; ++i) x(i, j) += scale * normal(rng) / std::sqrt(3.0);
    x.col(j).normalize();
  }
  return x;
}

}  // namespace

PointSet initial_points(int d, int n, StartKind kind, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::invalid_dimension, "d must be >= 1");
  if (n < 2) throw Error(ErrorCode::invalid_parameter, "need at least two points");
  std::mt19937_64 rng(splitmix64(seed));
  switch (kind) {
    case StartKind::equal_area_spiral:
      if (d != 2) throw Error(ErrorCode::unsupported_dimension, "the spiral start is defined on S^2");
      return PointSet(spiral(n));
    case StartKind::random_uniform:
      return PointSet(gaussian_columns(d + 1, n, rng));
    case StartKind::symmetric_double:
      if (n % 2) throw Error(ErrorCode::invalid_parameter, "symmetric starts need an even N");
      // The first N/2 spiral points cover the upper hemisphere.
      if (d == 2) return PointSet(spiral(n).leftCols(n / 2), true);
      return PointSet(gaussian_columns(d + 1, n / 2, rng), true);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Packing helpers shared by both solvers

namespace {

ParamVector pack(const PointSet& x) { return points_to_param(normalize_pointset(x).points); }

bool out_of_bounds(const ParamVector& p) {
  const auto periodic = p.periodic_mask();
  for (Eigen::Index i = 0; i < p.length(); ++i) {
    const double v = p.values()(i);
    const double ub = periodic[i] ? 2.0 * std::numbers::pi : std::numbers::pi;
    if (!(v >= 0.0 && v <= ub)) return true;
  }
  return false;
}

// Maps arbitrary angles back into their bounds. The reflection that restores
// a nonnegative diagonal is orthogonal, so every criterion value is kept.
ParamVector repack(const ParamVector& p) {
  Eigen::MatrixXd s = param_to_points(p).stored();
  const int lim = std::min<int>(p.dim(), static_cast<int>(s.cols()));
  for (int i = 1; i < lim; ++i)
    if (s(i, i) < 0.0) s.row(i) *= -1.0;
  return points_to_param(PointSet(std::move(s), p.symmetric()));
}

bool near_pole(const ParamVector& p, double eps = 1e-6) {
  const auto periodic = p.periodic_mask();
  for (Eigen::Index i = 0; i < p.length(); ++i) {
    if (periodic[i]) continue;
    const double v = p.values()(i);
    if (v < eps || v > std::numbers::pi - eps) return true;
  }
  return false;
}

// Re-normalizes with the stored points cyclically shifted so that a
// different point becomes the reference; the first shift that keeps every
// free colatitude away from 0 and pi wins.
ParamVector avoid_poles(const ParamVector& p) {
  const PointSet x = param_to_points(p);
  const int m = x.stored_size();
  for (int shift = 1; shift < std::min(m, 9); ++shift) {
    Eigen::MatrixXd s(x.stored().rows(), m);
    for (int j = 0; j < m; ++j) s.col(j) = x.stored().col((j + shift) % m);
    ParamVector q = pack(PointSet(std::move(s), x.symmetric()));
    if (!near_pole(q)) return q;
  }
  return p;
}

void fill_values(SolveResult& res, int t) {
  const PointSet& x = res.points;
  res.v_psi1 = variational_value(x, make_psi(PsiKind::psi1, x.dim(), t));
  res.v_psi2 = variational_value(x, make_psi(PsiKind::psi2, x.dim(), t));
  res.v_psi3 = variational_value(x, make_psi(PsiKind::psi3, x.dim(), t));
  res.rTr = x.dim() == 2 ? weyl_residual(x, t).rTr() : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

// ---------------------------------------------------------------------------
// Limited-memory quasi-Newton on V

SolveResult minimize_variational(const PointSet& x0, const PsiSpec& spec, const SolveOptions& opts) {
  if (x0.dim() != spec.d) throw Error(ErrorCode::dimension_mismatch, "start and psi dimensions differ");
  const double v_tol = opts.v_tol * spec.psi_at_1;
  ParamVector p = pack(x0);
  auto [v, g] = variational_value_and_gradient(p, spec);

  SolveResult res;
  res.history.push_back(v);
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> mem;
  int below = 0;

  while (true) {
    if (p.length() == 0) {
      res.stop_reason = "no free variables";
      break;
    }
    if (g.lpNorm<Eigen::Infinity>() <= opts.gradient_tolerance) {
      res.stop_reason = "gradient tolerance";
      break;
    }
    if (res.iterations >= opts.max_iterations) {
      res.stop_reason = "iteration limit";
      break;
    }
    if (v <= v_tol && ++below > 100) {
      res.stop_reason = "objective tolerance";
      break;
    }

    Eigen::VectorXd dir;
    if (mem.empty()) {
      dir = -g * std::min(1.0, 0.1 / g.lpNorm<Eigen::Infinity>());
    } else {
      // Two-loop recursion.
      Eigen::VectorXd q = -g;
      std::vector<double> alpha(mem.size());
      for (std::size_t k = mem.size(); k-- > 0;) {
        const auto& [s, y] = mem[k];
        alpha[k] = s.dot(q) / y.dot(s);
        q -= alpha[k] * y;
      }
      const auto& [s_last, y_last] = mem.back();
      q *= s_last.dot(y_last) / y_last.squaredNorm();
      for (std::size_t k = 0; k < mem.size(); ++k) {
        const auto& [s, y] = mem[k];
        const double beta = y.dot(q) / y.dot(s);
        q += (alpha[k] - beta) * s;
      }
      dir = q;
    }
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      mem.clear();
      dir = -g * std::min(1.0, 0.1 / g.lpNorm<Eigen::Infinity>());
      slope = g.dot(dir);
    }

    bool accepted = false;
    double step = 1.0;
    ParamVector trial = p;
    double v_new = v;
    Eigen::VectorXd g_new;
    for (int ls = 0; ls < 40; ++ls) {
      trial.values() = p.values() + step * dir;
      std::tie(v_new, g_new) = variational_value_and_gradient(trial, spec);
      if (v_new <= v + 1e-4 * step * slope && v_new < v) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!mem.empty()) {
        mem.clear();
        continue;
      }
      res.stop_reason = "line search made no progress";
      break;
    }

    Eigen::VectorXd s = trial.values() - p.values();
    Eigen::VectorXd y = g_new - g;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      mem.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(mem.size()) > opts.lbfgs_memory) mem.pop_front();
    }
    p = std::move(trial);
    v = v_new;
    g = std::move(g_new);
    ++res.iterations;
    res.history.push_back(v);

    if (out_of_bounds(p) || near_pole(p)) {
      p = out_of_bounds(p) ? repack(p) : p;
      if (near_pole(p)) p = avoid_poles(p);
      std::tie(v, g) = variational_value_and_gradient(p, spec);
      mem.clear();
    }
  }

  res.points = normalize_pointset(param_to_points(p)).points;
  res.classification = v <= v_tol ? Classification::design : Classification::local_minimum;
  res.converged = res.classification == Classification::design;
  fill_values(res, spec.t);
  return res;
}

// ---------------------------------------------------------------------------
// Levenberg-Marquardt on the Weyl residual

SolveResult solve_lsq(const PointSet& x0_in, int t, bool symmetric, const SolveOptions& opts,
                      const std::vector<double>* degree_coefficients) {
  if (x0_in.dim() != 2) throw Error(ErrorCode::unsupported_dimension, "least squares is provided for d = 2 only");
  if (symmetric && !x0_in.symmetric())
    throw Error(ErrorCode::invalid_parameter, "symmetric solve needs an antipodal start");
  const PointSet x0 = (!symmetric && x0_in.symmetric()) ? x0_in.expanded() : x0_in;
  const double n_pts = x0.size();
  const Eigen::VectorXd w =
      degree_coefficients ? weyl_weights(t, symmetric, *degree_coefficients) : weyl_weights(t, symmetric);
  const double r_tol = opts.r_tol_scale * n_pts * n_pts;
  const double eps = std::numeric_limits<double>::epsilon();
  const double floor = static_cast<double>(w.size()) * (n_pts * eps) * (n_pts * eps);

  ParamVector p = pack(x0);
  WeylSystem sys = weyl_system(p, t, symmetric);
  auto objective = [&](const Eigen::VectorXd& r) { return r.dot(w.cwiseProduct(r)); };
  double f = objective(sys.residual.r);
  double rtr = sys.residual.rTr();

  SolveResult res;
  res.history.push_back(f);
  double nu = opts.lm_nu0;
  const Eigen::Index n = p.length();

  while (true) {
    if (n == 0 || sys.residual.r.size() == 0) {
      res.stop_reason = "no free variables";
      break;
    }
    if (rtr <= floor) {
      res.stop_reason = "residual at roundoff level";
      break;
    }
    const Eigen::VectorXd wr = w.cwiseProduct(sys.residual.r);
    const Eigen::VectorXd g = sys.jacobian.transpose() * wr;
    if (g.lpNorm<Eigen::Infinity>() <= opts.gradient_tolerance) {
      res.stop_reason = "gradient tolerance";
      break;
    }
    if (res.iterations >= opts.max_iterations) {
      res.stop_reason = "iteration limit";
      break;
    }
    const Eigen::MatrixXd b = w.cwiseSqrt().asDiagonal() * sys.jacobian;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    h.selfadjointView<Eigen::Lower>().rankUpdate(b.transpose());
    h.triangularView<Eigen::StrictlyUpper>() = h.transpose();

    bool accepted = false;
    ParamVector trial = p;
    double f_new = f;
    while (nu <= opts.lm_nu_max) {
      Eigen::MatrixXd a = h;
      a.diagonal().array() += nu;
      Eigen::LLT<Eigen::MatrixXd> llt(a);
      if (llt.info() != Eigen::Success) {
        nu *= opts.lm_nu_increase;
        continue;
      }
      trial.values() = p.values() - llt.solve(g);
      const WeylSystem probe = weyl_system(trial, t, symmetric, false);
      f_new = objective(probe.residual.r);
      if (f_new < f) {
        accepted = true;
        nu *= opts.lm_nu_decrease;
        break;
      }
      nu *= opts.lm_nu_increase;
      if (rtr <= r_tol) break;
    }
    if (!accepted) {
      res.stop_reason = rtr <= r_tol ? "no further decrease below tolerance" : "damping limit";
      break;
    }

    const double ratio = f_new / f;
    p = out_of_bounds(trial) ? repack(trial) : std::move(trial);
    sys = weyl_system(p, t, symmetric);
    f = objective(sys.residual.r);
    rtr = sys.residual.rTr();
    ++res.iterations;
    res.history.push_back(f);
    if (rtr <= r_tol && ratio > 0.25) {
      res.stop_reason = "decrease stalled below tolerance";
      break;
    }
    const auto& hist = res.history;
    if (rtr > r_tol && opts.stall_window > 0 && static_cast<int>(hist.size()) > opts.stall_window &&
        f > (1.0 - opts.stall_decrease) * hist[hist.size() - 1 - opts.stall_window]) {
      res.stop_reason = "stalled above tolerance";
      break;
    }
  }

  res.points = normalize_pointset(param_to_points(p)).points;
  res.classification = rtr <= r_tol ? Classification::design : Classification::local_minimum;
  res.converged = res.classification == Classification::design;
  fill_values(res, t);
  return res;
}

// ---------------------------------------------------------------------------
// Multi-start driver

SolveResult generate_design(const GenerateRequest& req) {
  const int d = req.d, t = req.t;
  if (t < 1) throw Error(ErrorCode::invalid_degree, "t must be >= 1");
  const int n = req.n ? *req.n : static_cast<int>(reference_n(d, t, req.symmetric));
  if (n < 2) throw Error(ErrorCode::invalid_parameter, "need at least two points");
  if (req.symmetric && n % 2) throw Error(ErrorCode::invalid_parameter, "symmetric designs need even N");
  Method method = req.method;
  if (method == Method::automatic) method = d == 2 ? Method::lm : Method::grad;
  if (method == Method::lm && d != 2)
    throw Error(ErrorCode::unsupported_dimension, "least squares is provided for d = 2 only");

  const int runs = std::max(1, req.opts.restarts);
  std::vector<SolveResult> results(runs);
  parallel_for(static_cast<std::size_t>(runs), [&](std::size_t i) {
    const std::uint64_t seed = splitmix64(req.opts.seed + i);
    std::mt19937_64 rng(seed);
    PointSet start;
    if (d == 2) {
      const double scale = i == 0 ? 0.0 : 0.3 * std::sqrt(4.0 * std::numbers::pi / n);
      Eigen::MatrixXd x = jittered_spiral(n, scale, rng);
      start = req.symmetric ? PointSet(x.leftCols(n / 2), true) : PointSet(std::move(x));
    } else {
      start = initial_points(d, n, req.symmetric ? StartKind::symmetric_double : StartKind::random_uniform, seed);
    }
    SolveResult r;
    if (method == Method::lm && !req.symmetric && t % 2 == 1 && n % 2 == 0) {
      // Odd t with even N: the antipodal subproblem has far fewer conditions
      // and its solutions are designs of the full problem. Fall back to the
      // plain start when it fails.
      const PointSet half(start.stored().leftCols(n / 2), true);
      const SolveResult sym = solve_lsq(half, t, true, req.opts);
      r = solve_lsq(sym.converged ? sym.points.expanded() : start, t, false, req.opts);
      if (sym.converged) r.iterations += sym.iterations;
    } else {
      r = method == Method::lm ? solve_lsq(start, t, req.symmetric, req.opts)
                               : minimize_variational(start, make_psi(req.psi, d, t), req.opts);
    }
    r.restart = static_cast<int>(i);
    if (r.classification == Classification::design && n >= 2)
      r.geometry = mesh_ratio(r.points, req.opts.geometry_accuracy);
    results[i] = std::move(r);
  });

  int best = -1;
  int distinct = 0;
  for (int i = 0; i < runs; ++i) {
    if (results[i].classification != Classification::design) continue;
    bool seen = false;
    for (int j = 0; j < i && !seen; ++j)
      seen = results[j].classification == Classification::design &&
             same_inner_products(results[i].points, results[j].points, 1e-8);
    if (!seen) ++distinct;
    if (best < 0 || results[i].geometry->rho < results[best].geometry->rho) best = i;
  }
  if (best < 0) {
    auto score = [&](const SolveResult& r) { return method == Method::lm ? r.rTr : r.history.back(); };
    best = 0;
    for (int i = 1; i < runs; ++i)
      if (score(results[i]) < score(results[best])) best = i;
    try {
      results[best].geometry = mesh_ratio(results[best].points, req.opts.geometry_accuracy);
    } catch (const Error&) {
      // coincident points: no meaningful mesh ratio
    }
  }
  SolveResult out = std::move(results[best]);
  out.distinct_minima = distinct;
  return out;
}

}  // namespace sphdesign
