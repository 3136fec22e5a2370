#include "sphdesign/geometry.hpp"

#include "sphdesign/error.hpp"
#include "sphdesign/parallel.hpp"
#include "sphdesign/summation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

namespace sphdesign {

namespace {

// Geodesic distance from a chord length; accurate for tiny angles too.
inline double chord_angle(double chord) { return 2.0 * std::asin(std::min(1.0, 0.5 * chord)); }

double chord(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return std::sqrt(s);
}

void need_pairs(const PointSet& x, const char* what) {
  if (x.size() < 2) throw Error(ErrorCode::undefined_metric, std::string(what) + " needs at least two points");
}

}  // namespace

double separation(const PointSet& x) {
  need_pairs(x, "separation");
  const Eigen::MatrixXd pts = x.all_points();
  const std::size_t n = static_cast<std::size_t>(pts.cols());
  const int dim = static_cast<int>(pts.rows());
  std::vector<double> row_min(n, std::numeric_limits<double>::infinity());
  parallel_chunks(n, 16, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        row_min[i] = std::min(row_min[i], chord(pts.col(i).data(), pts.col(j).data(), dim));
  });
  return chord_angle(*std::min_element(row_min.begin(), row_min.end()));
}

// ---------------------------------------------------------------------------
// Mesh norm

namespace {

struct Cell {
  double ub;
  double value;
  long id;
};

struct CellOrder {
  bool operator()(const Cell& a, const Cell& b) const {
    if (a.ub != b.ub) return a.ub < b.ub;
    return a.id > b.id;
  }
};

// Cell geometry lives in flat arrays indexed by cell id.
struct CellStore {
  int d;
  std::vector<int> face;
  std::vector<double> half;
  std::vector<double> center;  // d face coordinates per cell

  long add(int f, double h, const double* c) {
    face.push_back(f);
    half.push_back(h);
    center.insert(center.end(), c, c + d);
    return static_cast<long>(face.size()) - 1;
  }
};

// Unit direction of face coordinates q on face f of the cube [-1,1]^{d+1}.
void direction(int d, int f, const double* q, double* u) {
  const int axis = f / 2;
  const double sign = f % 2 ? -1.0 : 1.0;
  double norm = 1.0;
  for (int i = 0, k = 0; i <= d; ++i) {
    if (i == axis) {
      u[i] = sign;
    } else {
      u[i] = q[k++];
      norm += u[i] * u[i];
    }
  }
  norm = std::sqrt(norm);
  for (int i = 0; i <= d; ++i) u[i] /= norm;
}

struct Evaluated {
  double value;
  double radius;
};

class Field {
 public:
  explicit Field(const Eigen::MatrixXd& pts) : pts_(pts), dim_(static_cast<int>(pts.rows())) {}

  double operator()(const double* u) const {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < pts_.cols(); ++j) best = std::min(best, chord(u, pts_.col(j).data(), dim_));
    return chord_angle(best);
  }

 private:
  const Eigen::MatrixXd& pts_;
  int dim_;
};

// Center value and the largest angle from the center to a corner. The angle
// to the center is quasi-convex on the face plane, so corners bound the cell.
Evaluated evaluate(const Field& f, int d, int face, double half, const double* c) {
  std::vector<double> u(d + 1), v(d + 1), q(d);
  direction(d, face, c, u.data());
  double radius = 0.0;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    for (int i = 0; i < d; ++i) q[i] = c[i] + ((mask >> i) & 1u ? half : -half);
    direction(d, face, q.data(), v.data());
    radius = std::max(radius, chord_angle(chord(u.data(), v.data(), d + 1)));
  }
  return {f(u.data()), radius};
}

// The covering radius is attained where the distance to the nearest points
// is equal: generically a Voronoi vertex (d+1 generators), on degenerate sets
// a larger equidistant set. Candidates are the projections of the search's
// best point onto the equidistant subspace of its k nearest generators,
// k = 2..d+1; the best of them removes the cell resolution from h.
Eigen::VectorXd snap_to_equidistant(const Eigen::MatrixXd& pts, const Field& field, const Eigen::VectorXd& near,
                                    double& value) {
  const int d = static_cast<int>(pts.rows()) - 1;
  const int kmax = static_cast<int>(std::min<Eigen::Index>(d + 1, pts.cols()));
  std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(pts.cols()));
  for (Eigen::Index j = 0; j < pts.cols(); ++j) dist[j] = {(pts.col(j) - near).squaredNorm(), j};
  std::partial_sort(dist.begin(), dist.begin() + kmax, dist.end());
  Eigen::VectorXd best = near;
  for (int k = 2; k <= kmax; ++k) {
    Eigen::MatrixXd m(k - 1, d + 1);
    for (int i = 1; i < k; ++i) m.row(i - 1) = (pts.col(dist[i].second) - pts.col(dist[0].second)).transpose();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 1e-8 * sv(0))) continue;  // dependent generators
    // Inside the equidistant great sphere the distance to the k generators
    // peaks at the normalized projection of -x_0; the projection of `near`
    // covers the vertex case k = d+1, where that sphere is a point pair.
    const Eigen::MatrixXd row_space = svd.matrixV().leftCols(k - 1);
    const Eigen::VectorXd x0 = pts.col(dist[0].second);
    for (const Eigen::VectorXd& from : {Eigen::VectorXd(near), Eigen::VectorXd(-x0)}) {
      Eigen::VectorXd c = from - row_space * (row_space.transpose() * from);
      if (!(c.norm() > 1e-12)) continue;
      c.normalize();
      const double v = field(c.data());
      if (v > value) {
        value = v;
        best = c;
      }
    }
  }
  return best;
}

}  // namespace

MeshNormResult mesh_norm(const PointSet& x, double accuracy, long max_cells) {
  if (x.size() < 1) throw Error(ErrorCode::undefined_metric, "mesh norm needs at least one point");
  if (!(accuracy >= 1e-8)) throw Error(ErrorCode::invalid_parameter, "mesh-norm accuracy must be >= 1e-8");
  const int d = x.dim();
  if (d > 8) throw Error(ErrorCode::unsupported_dimension, "mesh norm is limited to d <= 8");
  const Eigen::MatrixXd pts = x.all_points();
  const Field field(pts);
  const unsigned children = 1u << d;

  const double per_face = static_cast<double>(pts.cols()) / (2.0 * (d + 1));
  const int grid = std::max(2, 2 * static_cast<int>(std::ceil(std::pow(per_face, 1.0 / d))));

  CellStore store{d, {}, {}, {}};
  std::vector<long> pending;
  {
    const double h0 = 1.0 / grid;
    std::vector<int> idx(d, 0);
    std::vector<double> c(d);
    for (int f = 0; f < 2 * (d + 1); ++f) {
      std::fill(idx.begin(), idx.end(), 0);
      while (true) {
        for (int i = 0; i < d; ++i) c[i] = -1.0 + (2 * idx[i] + 1) * h0;
        pending.push_back(store.add(f, h0, c.data()));
        int i = 0;
        while (i < d && ++idx[i] == grid) idx[i++] = 0;
        if (i == d) break;
      }
    }
  }

  MeshNormResult out;
  out.h = -1.0;
  out.argmax.resize(d + 1);
  std::priority_queue<Cell, std::vector<Cell>, CellOrder> queue;
  double dropped = -std::numeric_limits<double>::infinity();
  std::vector<Evaluated> results;

  auto process = [&]() {
    results.resize(pending.size());
    parallel_for(pending.size(), [&](std::size_t k) {
      const long id = pending[k];
      results[k] = evaluate(field, d, store.face[id], store.half[id], &store.center[id * d]);
    });
    for (std::size_t k = 0; k < pending.size(); ++k) {
      if (results[k].value > out.h) {
        const long id = pending[k];
        out.h = results[k].value;
        direction(d, store.face[id], &store.center[id * d], out.argmax.data());
      }
    }
    for (std::size_t k = 0; k < pending.size(); ++k) {
      const double ub = results[k].value + results[k].radius;
      if (ub - out.h > accuracy)
        queue.push({ub, results[k].value, pending[k]});
      else
        dropped = std::max(dropped, ub);
    }
    out.cells += static_cast<long>(pending.size());
    pending.clear();
  };

  process();
  constexpr std::size_t kBatch = 64;
  std::vector<double> c(d);
  while (!queue.empty() && queue.top().ub - out.h > accuracy) {
    if (out.cells >= max_cells) {
      out.reached = false;
      break;
    }
    for (std::size_t b = 0; b < kBatch && !queue.empty() && queue.top().ub - out.h > accuracy; ++b) {
      const Cell cell = queue.top();
      queue.pop();
      const double h2 = 0.5 * store.half[cell.id];
      const int f = store.face[cell.id];
      for (unsigned mask = 0; mask < children; ++mask) {
        for (int i = 0; i < d; ++i) c[i] = store.center[cell.id * d + i] + ((mask >> i) & 1u ? h2 : -h2);
        pending.push_back(store.add(f, h2, c.data()));
      }
    }
    process();
  }
  out.argmax = snap_to_equidistant(pts, field, out.argmax, out.h);
  double upper = dropped;
  if (!queue.empty()) upper = std::max(upper, queue.top().ub);
  out.accuracy = std::max(0.0, upper - out.h);
  return out;
}

GeometryReport mesh_ratio(const PointSet& x, double accuracy) {
  need_pairs(x, "mesh ratio");
  GeometryReport r;
  r.delta = separation(x);
  if (r.delta == 0.0) throw Error(ErrorCode::undefined_metric, "coincident points give zero separation");
  const MeshNormResult m = mesh_norm(x, accuracy);
  r.h = m.h;
  r.h_accuracy = m.accuracy;
  r.rho = 2.0 * r.h / r.delta;
  r.rho_low = r.rho;
  r.rho_high = 2.0 * (r.h + r.h_accuracy) / r.delta;
  return r;
}

// ---------------------------------------------------------------------------
// Inner products and energy

namespace {

std::vector<double> sorted_inner_products(const PointSet& x) {
  const Eigen::MatrixXd pts = x.all_points();
  const Eigen::Index n = pts.cols();
  std::vector<double> all;
  all.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) all.push_back(std::clamp(pts.col(i).dot(pts.col(j)), -1.0, 1.0));
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

InnerProductSet inner_product_set(const PointSet& x, double dedup) {
  need_pairs(x, "inner-product set");
  InnerProductSet s;
  s.all = sorted_inner_products(x);
  std::size_t i = 0;
  while (i < s.all.size()) {
    std::size_t j = i;
    CompensatedSum sum;
    while (j < s.all.size() && s.all[j] - s.all[i] <= dedup) sum.add(s.all[j++]);
    s.values.push_back(sum.value() / static_cast<double>(j - i));
    s.counts.push_back(static_cast<long>(j - i));
    i = j;
  }
  return s;
}

bool same_inner_products(const PointSet& a, const PointSet& b, double tol) {
  if (a.size() != b.size() || a.dim() != b.dim()) return false;
  if (a.size() < 2) return true;
  const std::vector<double> u = sorted_inner_products(a), v = sorted_inner_products(b);
  for (std::size_t i = 0; i < u.size(); ++i)
    if (std::abs(u[i] - v[i]) > tol) return false;
  return true;
}

double riesz_energy(const PointSet& x, double s) {
  if (!(s > 0.0)) throw Error(ErrorCode::invalid_parameter, "Riesz exponent must be positive");
  need_pairs(x, "Riesz energy");
  const Eigen::MatrixXd pts = x.all_points();
  const std::size_t n = static_cast<std::size_t>(pts.cols());
  const int dim = static_cast<int>(pts.rows());
  std::vector<double> rows(n, 0.0);
  std::atomic<bool> coincident{false};
  parallel_chunks(n, 16, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      CompensatedSum acc;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double r = chord(pts.col(i).data(), pts.col(j).data(), dim);
        if (r == 0.0) {
          coincident = true;
          continue;
        }
        acc.add(std::pow(r, -s));
      }
      rows[i] = acc.value();
    }
  });
  if (coincident) throw Error(ErrorCode::infinite_energy, "coincident points");
  return stable_sum(rows);
}

}  // namespace sphdesign
