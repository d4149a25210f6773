#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace ucfem {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Throw std::runtime_error with message `what` unless `cond` holds.
inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

/// Perpendicular obtained by rotating v by -90 degrees: maps a facet tangent
/// to the facet normal under the fixed orientation convention used throughout.
inline Vec2 perp_cw(const Vec2& v) { return Vec2(v.y(), -v.x()); }

}  // namespace ucfem
