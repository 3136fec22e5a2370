#include "sphdesign/report_json.hpp"

#include "sphdesign/error.hpp"

#include <cmath>
#include <limits>

namespace sphdesign {

namespace {

nlohmann::json number(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

double read_number(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

}  // namespace

nlohmann::json to_json(const DesignReport& r) {
  nlohmann::json residual = nlohmann::json::array();
  for (double v : r.degree_residual) residual.push_back(number(v));
  return {
      {"d", r.d},
      {"N", r.n_points},
      {"t_claimed", r.t_claimed},
      {"t_max", r.t_max},
      {"tolerance", r.tolerance},
      {"max_abs_weyl", number(r.max_abs_weyl)},
      {"V_psi1", number(r.v_psi1)},
      {"V_psi2", number(r.v_psi2)},
      {"V_psi3", number(r.v_psi3)},
      {"rTr", number(r.rTr)},
      {"is_design", r.is_design},
      {"exactness_degree", r.exactness_degree},
      {"degree_residual", residual},
  };
}

DesignReport design_report_from_json(const nlohmann::json& j) {
  try {
    DesignReport r;
    r.d = j.at("d").get<int>();
    r.n_points = j.at("N").get<int>();
    r.t_claimed = j.at("t_claimed").get<int>();
    r.t_max = j.at("t_max").get<int>();
    r.tolerance = j.at("tolerance").get<double>();
    r.max_abs_weyl = read_number(j, "max_abs_weyl");
    r.v_psi1 = read_number(j, "V_psi1");
    r.v_psi2 = read_number(j, "V_psi2");
    r.v_psi3 = read_number(j, "V_psi3");
    r.rTr = read_number(j, "rTr");
    r.is_design = j.at("is_design").get<bool>();
    r.exactness_degree = j.at("exactness_degree").get<int>();
    for (const auto& v : j.at("degree_residual"))
      r.degree_residual.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("design report: ") + e.what());
  }
}

}  // namespace sphdesign
