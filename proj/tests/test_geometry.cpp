#include "doctest.h"
#include "oracles.hpp"

#include "sphdesign/error.hpp"
#include "sphdesign/geometry.hpp"
#include "sphdesign/parallel.hpp"
#include "sphdesign/polytopes.hpp"

#include <cmath>
#include <functional>
#include <numbers>

using namespace sphdesign;
using std::numbers::pi;

namespace {

double min_distance(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

// Covering radius by exhaustive enumeration of active sets: a local maximum
// of the distance to the nearest point is equidistant from some k points
// (2 <= k <= d+1) and, inside that equidistant great sphere, sits at the point
// farthest from them. Every such candidate is scored by brute force.
double covering_radius_by_enumeration(const Eigen::MatrixXd& x) {
  const int dim = static_cast<int>(x.rows());
  const int n = static_cast<int>(x.cols());
  double best = -1.0;
  std::vector<int> pick;
  std::function<void(int)> grow = [&](int start) {
    const int k = static_cast<int>(pick.size());
    if (k >= 2) {
      Eigen::MatrixXd m(k - 1, dim);
      for (int i = 1; i < k; ++i) m.row(i - 1) = (x.col(pick[i]) - x.col(pick[0])).transpose();
      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
      if (svd.singularValues()(k - 2) > 1e-10) {
        const Eigen::MatrixXd null = svd.matrixV().rightCols(dim - k + 1);
        const Eigen::VectorXd away = -(null * (null.transpose() * x.col(pick[0])));
        std::vector<Eigen::VectorXd> cand;
        if (away.norm() > 1e-12) cand.push_back(away.normalized());
        if (null.cols() == 1) {
          cand.push_back(null.col(0));
          cand.push_back(-null.col(0));
        }
        for (const auto& y : cand) best = std::max(best, min_distance(x, y));
      }
    }
    if (k == dim) return;
    for (int i = start; i < n; ++i) {
      pick.push_back(i);
      grow(i + 1);
      pick.pop_back();
    }
  };
  grow(0);
  return best;
}

double min_distance(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  double best = pi;
  for (Eigen::Index j = 0; j < x.cols(); ++j) best = std::min(best, std::acos(std::clamp(x.col(j).dot(y), -1.0, 1.0)));
  return best;
}

}  // namespace

TEST_CASE("separation") {
  CHECK(separation(icosahedron()) == doctest::Approx(std::atan(2.0)).epsilon(1e-14));
  CHECK(separation(antipodal_pair(2)) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(separation(cell600()) == doctest::Approx(pi / 5).epsilon(1e-14));
  CHECK(std::round(separation(icosahedron()) * 1e4) / 1e4 == doctest::Approx(1.1071));
  try {
    separation(PointSet(Eigen::Vector3d(1, 0, 0)));
    FAIL("expected undefined_metric");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::undefined_metric);
  }
}

TEST_CASE("mesh norm of classical sets") {
  const MeshNormResult oct = mesh_norm(octahedron(), 1e-4);
  CHECK(oct.h == doctest::Approx(std::acos(1.0 / std::sqrt(3.0))).epsilon(1e-12));
  CHECK(std::abs(oct.h - 0.9553) <= 1e-4);
  CHECK(oct.reached);
  // the whole equator is maximal; the snap still lands exactly on it
  CHECK(mesh_norm(antipodal_pair(2), 1e-4).h == doctest::Approx(pi / 2).epsilon(1e-12));
  CHECK(std::abs(mesh_norm(cell24(), 1e-4).h - 0.7854) <= 1e-3);
  CHECK(mesh_norm(icosahedron()).h == doctest::Approx(covering_radius_by_enumeration(icosahedron().all_points())).epsilon(1e-12));
}

TEST_CASE("mesh norm agrees with exhaustive enumeration on random sets") {
  std::mt19937_64 rng(101);
  for (int d : {2, 3})
    for (int n : {5, 9, 14}) {
      const PointSet x = oracle::random_points(d, n, rng);
      const MeshNormResult m = mesh_norm(x, 1e-6);
      const double exact = covering_radius_by_enumeration(x.all_points());
      CAPTURE(d);
      CAPTURE(n);
      CHECK(m.h <= exact + 1e-12);
      CHECK(exact <= m.h + m.accuracy + 1e-12);
      CHECK(m.accuracy <= 1e-6);
      CHECK(m.h == doctest::Approx(exact).epsilon(1e-10));
      // the reported value is attained at the reported point
      CHECK(min_distance(x.all_points(), m.argmax) == doctest::Approx(m.h).epsilon(1e-12));
    }
}

TEST_CASE("mesh norm bracket against random probes") {
  std::mt19937_64 rng(102);
  const PointSet x = oracle::random_points(2, 40, rng);
  const MeshNormResult m = mesh_norm(x, 1e-4);
  double probe = 0.0;
  for (int i = 0; i < 20000; ++i) probe = std::max(probe, min_distance(x.all_points(), oracle::random_unit(3, rng)));
  CHECK(probe <= m.h + m.accuracy);
  CHECK(m.h >= probe - 1e-1);
}

TEST_CASE("mesh norm input checks") {
  CHECK_THROWS_AS(mesh_norm(octahedron(), 1e-9), Error);
  std::mt19937_64 rng(3);
  const MeshNormResult capped = mesh_norm(oracle::random_points(3, 50, rng), 1e-8, 2000);
  CHECK_FALSE(capped.reached);
  CHECK(capped.accuracy > 1e-8);
}

TEST_CASE("mesh ratio of classical sets") {
  auto rho2 = [](const PointSet& x) { return std::round(mesh_ratio(x, 1e-4).rho * 100) / 100; };
  CHECK(rho2(octahedron()) == doctest::Approx(1.22));
  CHECK(rho2(icosahedron()) == doctest::Approx(1.18));
  CHECK(rho2(cell8()) == doctest::Approx(2.00));
  const GeometryReport g = mesh_ratio(icosahedron(), 1e-6);
  CHECK(g.rho_low <= g.rho);
  CHECK(g.rho <= g.rho_high);
  CHECK(g.rho_high - g.rho_low <= 2e-6 / g.delta + 1e-15);
}

TEST_CASE("inner product sets") {
  const InnerProductSet oct = inner_product_set(octahedron());
  REQUIRE(oct.values.size() == 2);
  CHECK(oct.values[0] == doctest::Approx(-1.0));
  CHECK(oct.values[1] == doctest::Approx(0.0).scale(1.0));
  CHECK(oct.counts[0] == 3);
  CHECK(oct.counts[1] == 12);
  const InnerProductSet pair = inner_product_set(antipodal_pair(2));
  REQUIRE(pair.values.size() == 1);
  CHECK(pair.values[0] == -1.0);
  const InnerProductSet ico = inner_product_set(icosahedron());
  REQUIRE(ico.values.size() == 3);
  const double r5 = 1.0 / std::sqrt(5.0);
  CHECK(ico.values[0] == doctest::Approx(-1.0));
  CHECK(ico.values[1] == doctest::Approx(-r5));
  CHECK(ico.values[2] == doctest::Approx(r5));
  CHECK(ico.counts[0] + ico.counts[1] + ico.counts[2] == 66);
  CHECK(ico.counts[0] == 6);
  CHECK(ico.all.size() == 66);
  std::mt19937_64 rng(4);
  CHECK(same_inner_products(icosahedron(), oracle::rotate(icosahedron(), oracle::random_orthogonal(3, rng))));
  CHECK_FALSE(same_inner_products(icosahedron(), octahedron()));
}

TEST_CASE("Riesz energy") {
  CHECK(riesz_energy(antipodal_pair(2), 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(riesz_energy(octahedron(), 1.0) == doctest::Approx(12.0 / std::sqrt(2.0) + 1.5).epsilon(1e-14));
  CHECK(riesz_energy(octahedron(), 1.0) == doctest::Approx(9.98528).epsilon(1e-6));
  Eigen::MatrixXd twice(3, 2);
  twice << Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, 1, 0);
  try {
    riesz_energy(PointSet(twice), 1.0);
    FAIL("expected infinite_energy");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::infinite_energy);
  }
}

TEST_CASE("metrics are rotation invariant") {
  std::mt19937_64 rng(103);
  for (int d : {2, 3}) {
    const PointSet x = oracle::random_points(d, 25, rng);
    const PointSet y = oracle::rotate(x, oracle::random_orthogonal(d + 1, rng));
    CHECK(std::abs(separation(x) - separation(y)) <= 1e-10);
    CHECK(std::abs(mesh_norm(x).h - mesh_norm(y).h) <= 1e-10);
    CHECK(std::abs(mesh_ratio(x).rho - mesh_ratio(y).rho) <= 1e-10);
    CHECK(std::abs(riesz_energy(x, 1.5) - riesz_energy(y, 1.5)) <= 1e-10 * riesz_energy(x, 1.5));
    const auto a = inner_product_set(x, 0.0).all, b = inner_product_set(y, 0.0).all;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10);
  }
}

TEST_CASE("union with a slightly rotated copy loses separation but not covering") {
  const PointSet x = icosahedron();
  const double h0 = mesh_norm(x, 1e-4).h;
  double last = pi;
  for (double theta : {0.1, 0.01, 0.001}) {
    Eigen::Matrix3d rot;
    rot << std::cos(theta), -std::sin(theta), 0, std::sin(theta), std::cos(theta), 0, 0, 0, 1;
    const PointSet rx = oracle::rotate(x, rot);
    Eigen::MatrixXd both(3, 24);
    both << x.stored(), rx.stored();
    const PointSet u(both);
    const double delta = separation(u);
    CHECK(delta < last);
    CHECK(delta <= theta + 1e-12);
    CHECK(mesh_norm(u, 1e-4).h <= h0 + 1e-4);
    last = delta;
  }
}

TEST_CASE("geometry is bitwise independent of the worker count") {
  std::mt19937_64 rng(104);
  const PointSet x = oracle::random_points(3, 60, rng);
  const int saved = thread_count();
  set_thread_count(1);
  const MeshNormResult a = mesh_norm(x, 1e-5);
  const double ea = riesz_energy(x, 2.0), sa = separation(x);
  set_thread_count(6);
  const MeshNormResult b = mesh_norm(x, 1e-5);
  const double eb = riesz_energy(x, 2.0), sb = separation(x);
  set_thread_count(saved);
  CHECK(a.h == b.h);
  CHECK(a.accuracy == b.accuracy);
  CHECK(a.cells == b.cells);
  CHECK(ea == eb);
  CHECK(sa == sb);
}
