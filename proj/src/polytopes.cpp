#include "sphdesign/polytopes.hpp"

#include "sphdesign/error.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>

namespace sphdesign {

namespace {

using Vec4 = std::array<double, 4>;

// Parity of a permutation of {0,1,2,3} by counting inversions.
bool is_even(const std::array<int, 4>& p) {
  int inv = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) inv += p[i] > p[j];
  return inv % 2 == 0;
}

// All (or all even) coordinate permutations of v with every sign pattern on
// its nonzero entries, without repeats.
void expand(const Vec4& v, bool even_only, std::vector<Vec4>& out) {
  std::set<std::array<long long, 4>> seen;
  for (const Vec4& w : out) {
    std::array<long long, 4> key;
    for (int i = 0; i < 4; ++i) key[i] = std::llround(w[i] * 1e9);
    seen.insert(key);
  }
  std::array<int, 4> p = {0, 1, 2, 3};
  do {
    if (even_only && !is_even(p)) continue;
    for (unsigned mask = 0; mask < 16; ++mask) {
      Vec4 w;
      bool skip = false;
      for (int i = 0; i < 4; ++i) {
        const double x = v[p[i]];
        const bool neg = (mask >> i) & 1u;
        if (neg && x == 0.0) skip = true;
        w[i] = neg ? -x : x;
      }
      if (skip) continue;
      std::array<long long, 4> key;
      for (int i = 0; i < 4; ++i) key[i] = std::llround(w[i] * 1e9);
      if (seen.insert(key).second) out.push_back(w);
    }
  } while (std::next_permutation(p.begin(), p.end()));
}

PointSet from_vectors(const std::vector<Vec4>& v) {
  Eigen::MatrixXd x(4, static_cast<Eigen::Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) {
    for (int i = 0; i < 4; ++i) x(i, static_cast<Eigen::Index>(j)) = v[j][i];
    x.col(static_cast<Eigen::Index>(j)).normalize();
  }
  return PointSet(std::move(x));
}

PointSet normalized_columns(Eigen::MatrixXd x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) x.col(j).normalize();
  return PointSet(std::move(x));
}

constexpr double kPhi = std::numbers::phi;

}  // namespace

PointSet antipodal_pair(int d) {
  if (d < 1) throw Error(ErrorCode::invalid_dimension, "d must be >= 1");
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(d + 1, 2);
  x(0, 0) = 1.0;
  x(0, 1) = -1.0;
  return PointSet(std::move(x));
}

PointSet great_triangle() {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 3);
  for (int j = 0; j < 3; ++j) {
    const double a = 2.0 * std::numbers::pi * j / 3.0;
    x(0, j) = std::cos(a);
    x(1, j) = std::sin(a);
  }
  return PointSet(std::move(x));
}

PointSet octahedron() {
  Eigen::MatrixXd x(3, 6);
  x << Eigen::MatrixXd::Identity(3, 3), -Eigen::MatrixXd::Identity(3, 3);
  return PointSet(std::move(x));
}

PointSet icosahedron() {
  Eigen::MatrixXd x(3, 12);
  int j = 0;
  for (int axis = 0; axis < 3; ++axis)
    for (double a : {1.0, -1.0})
      for (double b : {kPhi, -kPhi}) {
        Eigen::Vector3d v;
        v(axis) = 0.0;
        v((axis + 1) % 3) = a;
        v((axis + 2) % 3) = b;
        x.col(j++) = v;
      }
  return normalized_columns(std::move(x));
}

PointSet cell5() {
  // Vertices e_i - c of the standard simplex in R^5, expressed in an
  // orthonormal basis of the hyperplane sum(x) = 0.
  const Eigen::MatrixXd centered = Eigen::MatrixXd::Identity(5, 5) - Eigen::MatrixXd::Constant(5, 5, 0.2);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(centered);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(5, 4);
  return normalized_columns(q.transpose() * centered);
}

PointSet cell16() {
  Eigen::MatrixXd x(4, 8);
  x << Eigen::MatrixXd::Identity(4, 4), -Eigen::MatrixXd::Identity(4, 4);
  return PointSet(std::move(x));
}

PointSet cell8() {
  std::vector<Vec4> v;
  expand({0.5, 0.5, 0.5, 0.5}, false, v);
  return from_vectors(v);
}

PointSet cell24() {
  std::vector<Vec4> v;
  expand({1.0, 1.0, 0.0, 0.0}, false, v);
  return from_vectors(v);
}

PointSet cell24_with_dual() {
  std::vector<Vec4> v;
  expand({1.0, 1.0, 0.0, 0.0}, false, v);
  expand({1.0, 0.0, 0.0, 0.0}, false, v);
  expand({0.5, 0.5, 0.5, 0.5}, false, v);
  return from_vectors(v);
}

PointSet cell600() {
  std::vector<Vec4> v;
  expand({1.0, 0.0, 0.0, 0.0}, false, v);
  expand({0.5, 0.5, 0.5, 0.5}, false, v);
  expand({0.5 * kPhi, 0.5, 0.5 / kPhi, 0.0}, true, v);
  return from_vectors(v);
}

PointSet cell120() {
  const double s5 = std::sqrt(5.0);
  const double p2 = kPhi * kPhi, ip = 1.0 / kPhi, ip2 = ip * ip;
  std::vector<Vec4> v;
  expand({0.0, 0.0, 2.0, 2.0}, false, v);
  expand({1.0, 1.0, 1.0, s5}, false, v);
  expand({ip2, kPhi, kPhi, kPhi}, false, v);
  expand({ip, ip, ip, p2}, false, v);
  expand({0.0, ip2, 1.0, p2}, true, v);
  expand({0.0, ip, kPhi, s5}, true, v);
  expand({ip, 1.0, kPhi, 2.0}, true, v);
  return from_vectors(v);
}

std::vector<std::string> builtin_names() {
  return {"pair",    "triangle", "octahedron",   "icosahedron", "pair3",   "5-cell",
          "8-cell",  "16-cell",  "24-cell",      "24-cell+dual", "600-cell", "120-cell"};
}

BuiltinDesign builtin_design(const std::string& name) {
  if (name == "pair") return {name, 2, 1, antipodal_pair(2)};
  if (name == "triangle") return {name, 2, 1, great_triangle()};
  if (name == "octahedron") return {name, 2, 3, octahedron()};
  if (name == "icosahedron") return {name, 2, 5, icosahedron()};
  if (name == "pair3") return {name, 3, 1, antipodal_pair(3)};
  if (name == "5-cell") return {name, 3, 2, cell5()};
  if (name == "8-cell") return {name, 3, 3, cell8()};
  if (name == "16-cell") return {name, 3, 3, cell16()};
  if (name == "24-cell") return {name, 3, 5, cell24()};
  if (name == "24-cell+dual") return {name, 3, 7, cell24_with_dual()};
  if (name == "600-cell") return {name, 3, 11, cell600()};
  if (name == "120-cell") return {name, 3, 11, cell120()};
  throw Error(ErrorCode::invalid_parameter, "unknown built-in design '" + name + "'");
}

}  // namespace sphdesign
