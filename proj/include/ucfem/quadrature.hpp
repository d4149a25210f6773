#pragma once

/// Reference quadrature rules. Segment rules are Gauss-Legendre on [0,1];
/// triangle rules are collapsed tensor-product Gauss rules on the reference
/// triangle (0,0),(1,0),(0,1) with positive weights summing to 1/2. A rule of
/// order k integrates every polynomial of total degree <= k exactly.

#include <vector>

#include "ucfem/common.hpp"

namespace ucfem {

struct SegmentRule {
  std::vector<double> points;   // in (0,1)
  std::vector<double> weights;  // sum to 1
};

struct TriangleRule {
  std::vector<Vec2> points;
  std::vector<double> weights;  // sum to 1/2
};

const SegmentRule& segment_rule(int order);
const TriangleRule& triangle_rule(int order);

}  // namespace ucfem
