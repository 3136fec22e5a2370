#include "sphdesign/sphere_core.hpp"

#include "sphdesign/error.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace sphdesign {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_dimension: return "invalid-dimension";
    case ErrorCode::invalid_point: return "invalid-point";
    case ErrorCode::not_normalized: return "not-normalized";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::unsupported_dimension: return "unsupported-dimension";
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::invalid_degree: return "invalid-degree";
    case ErrorCode::no_zero: return "no-zero";
    case ErrorCode::undefined_metric: return "undefined-metric";
    case ErrorCode::infinite_energy: return "infinite-energy";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::overflow: return "overflow";
    case ErrorCode::io_error: return "io-error";
  }
  return "error";
}

// ---------------------------------------------------------------------------
// PointSet

PointSet::PointSet(Eigen::MatrixXd coords, bool symmetric)
    : coords_(std::move(coords)), symmetric_(symmetric) {
  if (coords_.rows() < 2) throw Error(ErrorCode::invalid_dimension, "points need d >= 1");
  if (coords_.cols() < 1) throw Error(ErrorCode::invalid_point, "empty point set");
  for (Eigen::Index j = 0; j < coords_.cols(); ++j) {
    const double norm = coords_.col(j).norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kUnitTolerance) {
      throw Error(ErrorCode::invalid_point,
                  "point " + std::to_string(j) + " has norm " + std::to_string(norm));
    }
  }
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows, bool symmetric) {
  if (rows.empty()) throw Error(ErrorCode::invalid_point, "empty point set");
  const std::size_t width = rows.front().size();
  Eigen::MatrixXd m(width, rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != width) throw Error(ErrorCode::dimension_mismatch, "ragged rows");
    for (std::size_t i = 0; i < width; ++i) m(i, j) = rows[j][i];
  }
  return PointSet(std::move(m), symmetric);
}

Eigen::MatrixXd PointSet::all_points() const {
  if (!symmetric_) return coords_;
  Eigen::MatrixXd all(coords_.rows(), 2 * coords_.cols());
  all.leftCols(coords_.cols()) = coords_;
  all.rightCols(coords_.cols()) = -coords_;
  return all;
}

Eigen::VectorXd PointSet::point(int i) const {
  const int m = stored_size();
  if (i < m) return coords_.col(i);
  return -coords_.col(i - m);
}

PointSet PointSet::expanded() const { return PointSet(all_points(), false); }

// ---------------------------------------------------------------------------
// ParamVector

ParamVector::ParamVector(int d, int n_points, bool symmetric, Eigen::VectorXd values)
    : d_(d), n_points_(n_points), symmetric_(symmetric), values_(std::move(values)) {
  if (d < 1) throw Error(ErrorCode::invalid_dimension, "d must be >= 1");
  if (symmetric && n_points % 2 != 0)
    throw Error(ErrorCode::invalid_parameter, "symmetric sets need an even point count");
  if (values_.size() != count(d, stored_points()))
    throw Error(ErrorCode::dimension_mismatch, "parameter vector has wrong length");
}

Eigen::Index ParamVector::count(int d, int m) {
  if (m <= d) return static_cast<Eigen::Index>(m) * (m - 1) / 2;
  return static_cast<Eigen::Index>(m) * d - static_cast<Eigen::Index>(d) * (d + 1) / 2;
}

Eigen::Index ParamVector::offset(int d, int j) { return count(d, j); }

Eigen::VectorXd ParamVector::lower_bounds() const { return Eigen::VectorXd::Zero(values_.size()); }

Eigen::VectorXd ParamVector::upper_bounds() const {
  Eigen::VectorXd ub(values_.size());
  const auto periodic = periodic_mask();
  for (Eigen::Index p = 0; p < ub.size(); ++p)
    ub(p) = periodic[p] ? 2.0 * std::numbers::pi : std::numbers::pi;
  return ub;
}

std::vector<bool> ParamVector::periodic_mask() const {
  std::vector<bool> mask(values_.size(), false);
  for (int j = 0; j < stored_points(); ++j) {
    const int k = free_angles(d_, j);
    if (k == d_) mask[offset(d_, j) + d_ - 1] = true;
  }
  return mask;
}

// ---------------------------------------------------------------------------
// Basic geometry

double surface_area(int d) {
  if (d < 1) throw Error(ErrorCode::invalid_dimension, "surface_area needs d >= 1");
  const double h = 0.5 * (d + 1);
  return 2.0 * std::exp(h * std::log(std::numbers::pi) - std::lgamma(h));
}

double geodesic_dist(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::dimension_mismatch, "geodesic_dist");
  if (std::abs(x.norm() - 1.0) > kUnitTolerance || std::abs(y.norm() - 1.0) > kUnitTolerance)
    throw Error(ErrorCode::invalid_point, "geodesic_dist needs unit vectors");
  return std::acos(std::clamp(x.dot(y), -1.0, 1.0));
}

Eigen::VectorXd angles_to_point(const Eigen::Ref<const Eigen::VectorXd>& phi) {
  const Eigen::Index d = phi.size();
  Eigen::VectorXd x(d + 1);
  double prod = 1.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    x(i) = prod * std::cos(phi(i));
    prod *= std::sin(phi(i));
  }
  x(d) = prod;
  return x;
}

Eigen::VectorXd point_to_angles(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::Index d = x.size() - 1;
  Eigen::VectorXd phi(d);
  // tail(i) = |(x_i, ..., x_d)|
  Eigen::VectorXd tail(d + 2);
  tail(d + 1) = 0.0;
  for (Eigen::Index i = d; i >= 0; --i) tail(i) = std::hypot(tail(i + 1), x(i));
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    phi(i) = tail(i) == 0.0 ? 0.0 : std::atan2(tail(i + 1), x(i));
  }
  double last = 0.0;
  if (x(d) != 0.0 || x(d - 1) != 0.0) {
    last = std::atan2(x(d), x(d - 1));
    if (last < 0.0) last += 2.0 * std::numbers::pi;
    if (last >= 2.0 * std::numbers::pi) last = 0.0;
  }
  phi(d - 1) = last;
  return phi;
}

Eigen::MatrixXd angles_jacobian(const Eigen::Ref<const Eigen::VectorXd>& phi) {
  const Eigen::Index d = phi.size();
  Eigen::VectorXd s = phi.array().sin(), c = phi.array().cos();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(d + 1, d);
  for (Eigen::Index m = 0; m <= d; ++m) {
    const double tail = m < d ? c(m) : 1.0;
    for (Eigen::Index i = 0; i < std::min(m + 1, d); ++i) {
      double prod = 1.0;
      for (Eigen::Index k = 0; k < m && k < d; ++k)
        if (k != i) prod *= s(k);
      if (i == m)
        jac(m, i) = -prod * s(m);
      else
        jac(m, i) = prod * c(i) * tail;
    }
  }
  return jac;
}

Eigen::MatrixXd unpack_angles(const ParamVector& p) {
  const int d = p.dim();
  const int m = p.stored_points();
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(d, m);
  for (int j = 0; j < m; ++j) {
    const Eigen::Index off = ParamVector::offset(d, j);
    for (int i = 0; i < ParamVector::free_angles(d, j); ++i) phi(i, j) = p.values()(off + i);
  }
  return phi;
}

PointSet param_to_points(const ParamVector& p) {
  const Eigen::MatrixXd phi = unpack_angles(p);
  Eigen::MatrixXd x(p.dim() + 1, phi.cols());
  for (Eigen::Index j = 0; j < phi.cols(); ++j) x.col(j) = angles_to_point(phi.col(j));
  return PointSet(std::move(x), p.symmetric());
}

bool is_normalized(const PointSet& x, double tol) {
  const Eigen::MatrixXd& s = x.stored();
  const int d = x.dim();
  const int lim = std::min<int>(d, x.stored_size());
  for (int j = 0; j < lim; ++j) {
    if (s(j, j) < -tol) return false;
    for (int i = j + 1; i <= d; ++i)
      if (std::abs(s(i, j)) > tol) return false;
  }
  return true;
}

ParamVector points_to_param(const PointSet& x) {
  if (!is_normalized(x)) throw Error(ErrorCode::not_normalized, "point set is not normalized");
  const int d = x.dim();
  const int m = x.stored_size();
  Eigen::VectorXd values(ParamVector::count(d, m));
  for (int j = 0; j < m; ++j) {
    const int k = ParamVector::free_angles(d, j);
    if (k == 0) continue;
    const Eigen::VectorXd phi = point_to_angles(x.stored().col(j));
    values.segment(ParamVector::offset(d, j), k) = phi.head(k);
  }
  return ParamVector(d, x.size(), x.symmetric(), std::move(values));
}

Normalized normalize_pointset(const PointSet& x) {
  const Eigen::MatrixXd& s = x.stored();
  const int d = x.dim();
  const int m = x.stored_size();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(s);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d + 1, d + 1);
  Eigen::MatrixXd y = q.transpose() * s;

  const int lim = std::min(d, m);
  for (int i = 0; i < lim; ++i) {
    if (y(i, i) < 0.0) {
      y.row(i) *= -1.0;
      q.col(i) *= -1.0;
    }
  }
  for (int j = 0; j < lim; ++j) {
    for (int i = j + 1; i <= d; ++i) y(i, j) = 0.0;
    y.col(j) /= y.col(j).norm();
  }
  for (int j = lim; j < m; ++j) y.col(j) /= y.col(j).norm();
  return {PointSet(std::move(y), x.symmetric()), std::move(q)};
}

// ---------------------------------------------------------------------------
// File I/O

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  throw Error(ErrorCode::parse_error, path + ":" + std::to_string(line) + ": " + what);
}

bool parse_header(const std::string& line, PointSetHeader& h) {
  std::istringstream in(line.substr(1));
  std::string tok;
  bool any = false;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    char* end = nullptr;
    const long v = std::strtol(val.c_str(), &end, 10);
    if (end == val.c_str() || *end != '\0') continue;
    if (key == "d") h.d = static_cast<int>(v), any = true;
    else if (key == "N") h.n = static_cast<int>(v), any = true;
    else if (key == "t") h.t = static_cast<int>(v), any = true;
    else if (key == "sym") h.symmetric = v != 0, any = true;
  }
  return any;
}

}  // namespace

LoadedPointSet read_pointset_file(const std::string& path, std::optional<int> expected_d) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);

  LoadedPointSet out;
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  std::optional<std::size_t> width;
  if (expected_d) width = static_cast<std::size_t>(*expected_d + 1);

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      if (!header_seen && rows.empty() && parse_header(line.substr(first), out.header)) {
        header_seen = true;
        if (out.header.d) {
          if (expected_d && *expected_d != *out.header.d)
            parse_fail(path, lineno, "header d does not match the expected dimension");
          width = static_cast<std::size_t>(*out.header.d + 1);
        }
      }
      continue;
    }
    std::vector<double> row;
    const char* p = line.c_str();
    for (;;) {
      while (*p == ' ' || *p == '\t' || *p == ',') ++p;
      if (*p == '\0') break;
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p) parse_fail(path, lineno, "not a number");
      if (!std::isfinite(v)) parse_fail(path, lineno, "non-finite coordinate");
      row.push_back(v);
      p = end;
    }
    if (!width) width = row.size();
    if (row.size() != *width)
      parse_fail(path, lineno,
                 "expected " + std::to_string(*width) + " columns, found " + std::to_string(row.size()));
    if (row.size() < 2) parse_fail(path, lineno, "points need at least 2 coordinates");

    double norm = 0.0;
    for (double v : row) norm += v * v;
    norm = std::sqrt(norm);
    const double dev = std::abs(norm - 1.0);
    if (dev > 1e-8) {
      throw Error(ErrorCode::invalid_point,
                  path + ":" + std::to_string(lineno) + ": row norm " + std::to_string(norm));
    }
    if (dev > kUnitTolerance) {
      for (double& v : row) v /= norm;
      out.warnings.push_back(path + ":" + std::to_string(lineno) + ": row renormalized");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) parse_fail(path, lineno, "no points");
  if (out.header.n && *out.header.n != static_cast<int>(rows.size()))
    parse_fail(path, lineno, "header N does not match the number of rows");

  if (out.header.symmetric) {
    if (rows.size() % 2 != 0) parse_fail(path, lineno, "sym=1 needs an even number of rows");
    const std::size_t half = rows.size() / 2;
    for (std::size_t j = 0; j < half; ++j)
      for (std::size_t i = 0; i < *width; ++i)
        if (std::abs(rows[j][i] + rows[j + half][i]) > kUnitTolerance)
          parse_fail(path, static_cast<int>(j + half + 1), "sym=1 but rows are not antipodal");
    rows.resize(half);
  }
  out.points = PointSet::from_rows(rows, out.header.symmetric);
  return out;
}

PointSet read_pointset(const std::string& path, std::optional<int> expected_d) {
  return read_pointset_file(path, expected_d).points;
}

void write_pointset(const PointSet& x, const std::string& path, std::optional<int> t) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error(ErrorCode::io_error, "cannot write " + path);
  std::fprintf(f, "# d=%d N=%d", x.dim(), x.size());
  if (t) std::fprintf(f, " t=%d", *t);
  std::fprintf(f, " sym=%d\n", x.symmetric() ? 1 : 0);
  const Eigen::MatrixXd all = x.all_points();
  for (Eigen::Index j = 0; j < all.cols(); ++j) {
    for (Eigen::Index i = 0; i < all.rows(); ++i)
      std::fprintf(f, i == 0 ? "%.17g" : " %.17g", all(i, j));
    std::fputc('\n', f);
  }
  if (std::fclose(f) != 0) throw Error(ErrorCode::io_error, "failed writing " + path);
}

}  // namespace sphdesign
