#pragma once

#include "sphdesign/quadrature.hpp"

#include "json.hpp"

namespace sphdesign {

/// Machine form of a verification report. NaN fields are written as null
/// and read back as NaN; doubles round-trip exactly.
nlohmann::json to_json(const DesignReport& r);
DesignReport design_report_from_json(const nlohmann::json& j);

}  // namespace sphdesign
