#pragma once

#include "sphdesign/sphere_core.hpp"

#include <string>
#include <vector>

namespace sphdesign {

/// Classical configurations with known design strength.
struct BuiltinDesign {
  std::string name;
  int d;
  int strength;  // largest t for which the set is a t-design
  PointSet points;
};

PointSet antipodal_pair(int d);
PointSet great_triangle();  // three points on a great circle of S^2
PointSet octahedron();
PointSet icosahedron();
PointSet cell5();
PointSet cell8();
PointSet cell16();
PointSet cell24();
PointSet cell24_with_dual();
PointSet cell120();
PointSet cell600();

std::vector<std::string> builtin_names();
/// Throws invalid-parameter for an unknown name.
BuiltinDesign builtin_design(const std::string& name);

}  // namespace sphdesign
