#include "doctest.h"
#include "oracles.hpp"

#include "sphdesign/bounds.hpp"
#include "sphdesign/error.hpp"
#include "sphdesign/specfun.hpp"

#include <cmath>
#include <numbers>

using namespace sphdesign;

namespace {

std::uint64_t u(const oracle::CsvRow& row, const std::string& key) { return std::stoull(row.at(key)); }

// Delsarte-Goethals-Seidel from binomials, written out independently.
std::uint64_t dgs(int d, int t) {
  const int e = t / 2;
  if (t % 2 == 0) return binomial(d + e, d) + binomial(d + e - 1, d);
  return 2 * binomial(d + e, d);
}

// Yudin through an independently located zero and the closed-form cap
// integrals for d = 2 and d = 3.
double yudin_oracle(int d, int t) {
  const double theta = oracle::gegenbauer_first_zero_angle(0.5 * (d + 1), t);
  if (d == 2) return 2.0 / (1.0 - std::cos(theta));
  return (std::numbers::pi / 2) / (theta / 2 - std::sin(2 * theta) / 4);
}

}  // namespace

TEST_CASE("DGS bound against binomials and the d = 2 closed form") {
  for (int t = 1; t <= 500; ++t) {
    const std::uint64_t e = t / 2;
    const std::uint64_t closed = t % 2 ? (e + 1) * (e + 2) : (e + 1) * (e + 1);
    CHECK(n_star(2, t) == closed);
    CHECK(n_star(2, t) == dgs(2, t));
  }
  for (int d = 3; d <= 5; ++d)
    for (int t = 1; t <= 40; ++t) CHECK(n_star(d, t) == dgs(d, t));
  CHECK(n_star(3, 5) == 20);
}

TEST_CASE("Yudin bound against an independent zero finder") {
  for (int t = 2; t <= 500; ++t)
    CHECK(yudin_bound(2, t) == doctest::Approx(yudin_oracle(2, t)).epsilon(1e-11));
  for (int t = 2; t <= 60; ++t)
    CHECK(yudin_bound(3, t) == doctest::Approx(yudin_oracle(3, t)).epsilon(1e-11));
  CHECK(n_plus(2, 1) == 2);
  CHECK(n_plus(2, 9) == 31);
  CHECK(n_plus(2, 180) == 8976);
  CHECK(n_plus(3, 11) == 117);
  for (int t = 10; t <= 180; ++t) CHECK(n_star(2, t) <= n_plus(2, t));
}

TEST_CASE("degrees-of-freedom counts") {
  CHECK(n_hat(3, 13) == 340);
  CHECK(n_bar(3, 15) == 458);
  try {
    n_bar(2, 4);
    FAIL("expected invalid_degree");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_degree);
  }
  // N_hat is the smallest N with at least as many free angles as conditions
  for (int d : {2, 3, 4})
    for (int t = 1; t <= 30; ++t) {
      const std::uint64_t n = n_hat(d, t);
      CHECK(variable_count(d, n, false) >= condition_count(d, t, false));
      CHECK(variable_count(d, n - 1, false) < condition_count(d, t, false));
      if (t % 2) {
        const std::uint64_t nb = n_bar(d, t);
        CHECK(nb % 2 == 0);
        CHECK(variable_count(d, nb, true) >= condition_count(d, t, true));
        // t = 1 has no even-degree conditions; two points is already minimal
        if (t > 1) CHECK(variable_count(d, nb - 2, true) < condition_count(d, t, true));
      }
    }
}

TEST_CASE("efficiency") {
  for (int t = 1; t <= 50; ++t) CHECK(efficiency(2, t, (t + 1) * (t + 1)) == 0.5);
  CHECK(efficiency(2, 3, 6) == doctest::Approx(16.0 / 12.0).epsilon(1e-15));
  CHECK(efficiency(2, 30, 482) == doctest::Approx(961.0 / 964.0).epsilon(1e-15));
  CHECK(bounds_row(2, 30).efficiency(482) == doctest::Approx(0.9969).epsilon(1e-4));
}

TEST_CASE("non-symmetric S^2 tables") {
  for (const char* name : {"table_sf1.csv", "table_sf2.csv", "table_sf3.csv"}) {
    const auto rows = oracle::read_csv(oracle::data_path(name));
    REQUIRE(rows.size() == 60);
    for (const auto& row : rows) {
      const int t = static_cast<int>(u(row, "t"));
      CAPTURE(t);
      CHECK(n_star(2, t) == u(row, "N_star"));
      CHECK(n_plus(2, t) == u(row, "N_plus"));
      const std::uint64_t n = reference_n(2, t, false);
      CHECK(n == u(row, "N"));
      const bool small_odd = t % 2 == 1 && t <= 15 && t >= 3;
      CHECK(n == n_hat(2, t) - (small_odd ? 1 : 0));
      CHECK(variable_count(2, n, false) == u(row, "n"));
      CHECK(condition_count(2, t, false) == u(row, "m"));
      const std::int64_t gap = static_cast<std::int64_t>(u(row, "n")) - static_cast<std::int64_t>(u(row, "m"));
      if (!small_odd) CHECK((gap == 0 || gap == 1));
    }
  }
}

TEST_CASE("symmetric S^2 tables") {
  std::size_t total = 0;
  for (const char* name : {"table_ss1.csv", "table_ss2.csv", "table_ss3.csv"}) {
    for (const auto& row : oracle::read_csv(oracle::data_path(name))) {
      const int t = static_cast<int>(u(row, "t"));
      CAPTURE(t);
      ++total;
      CHECK(n_star(2, t) == u(row, "N_star"));
      CHECK(n_plus(2, t) == u(row, "N_plus"));
      const std::uint64_t n = reference_n(2, t, true);
      CHECK(n == u(row, "N"));
      CHECK(variable_count(2, n, true) == u(row, "n"));
      CHECK(condition_count(2, t, true) == u(row, "m"));
    }
  }
  CHECK(total == 163);
}

TEST_CASE("S^3 tables") {
  for (const auto& row : oracle::read_csv(oracle::data_path("table_s3sdc.csv"))) {
    const int t = static_cast<int>(u(row, "t"));
    CAPTURE(t);
    CHECK(n_star(3, t) == u(row, "N_star"));
    CHECK(n_plus(3, t) == u(row, "N_plus"));
    CHECK(n_hat(3, t) == u(row, "N"));
    CHECK(variable_count(3, n_hat(3, t), false) == u(row, "n"));
    CHECK(condition_count(3, t, false) == u(row, "m"));
    const auto gap = static_cast<std::int64_t>(u(row, "n")) - static_cast<std::int64_t>(u(row, "m"));
    // n = 3N - 6 with N the smallest count reaching m, so the surplus is below d
    CHECK((gap == 0 || gap == 1 || gap == 2));
  }
  for (const auto& row : oracle::read_csv(oracle::data_path("table_s3sdr.csv"))) {
    const int t = static_cast<int>(u(row, "t"));
    CHECK(n_star(3, t) == u(row, "N_star"));
    CHECK(n_plus(3, t) == u(row, "N_plus"));
    CHECK(n_hat(3, t) == u(row, "N_hat"));
  }
  // The n and m columns of the symmetric table repeat the non-symmetric
  // N_hat row, so only the bounds and N are compared there.
  for (const auto& row : oracle::read_csv(oracle::data_path("table_s3sds.csv"))) {
    const int t = static_cast<int>(u(row, "t"));
    CAPTURE(t);
    CHECK(n_star(3, t) == u(row, "N_star"));
    CHECK(n_plus(3, t) == u(row, "N_plus"));
    CHECK(n_bar(3, t) == u(row, "N"));
    CHECK(variable_count(3, n_bar(3, t), true) >= condition_count(3, t, true));
  }
}
