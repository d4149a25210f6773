#pragma once

/// Interface geometry on the background mesh: elements are classified against
/// the piecewise-linear vertex interpolant of the level set, cut elements are
/// decomposed into sub-triangles per side plus an interface segment, and
/// quadrature rules are generated on the resulting pieces (all still in the
/// undeformed configuration).

#include <vector>

#include "ucfem/levelset.hpp"
#include "ucfem/mesh.hpp"
#include "ucfem/quadrature.hpp"

namespace ucfem {

enum class Side { neg = 0, pos = 1 };
inline int side_index(Side s) { return static_cast<int>(s); }
inline Side other_side(Side s) { return s == Side::neg ? Side::pos : Side::neg; }

enum class ElemClass { neg, pos, cut };

struct SubTri {
  std::array<Vec2, 3> v;  // physical corners, arbitrary orientation
  double area() const {
    const Vec2 d1 = v[1] - v[0], d2 = v[2] - v[0];
    return 0.5 * std::abs(d1.x() * d2.y() - d1.y() * d2.x());
  }
};

struct CutElement {
  std::vector<SubTri> tris[2];     // index by side_index: negative / positive part
  Vec2 seg_a = Vec2::Zero();       // interface segment endpoints on the element
  Vec2 seg_b = Vec2::Zero();
  Vec2 normal_lin = Vec2::Zero();  // unit normal of the segment, negative -> positive
};

struct CutGeometry {
  std::vector<double> phi_vert;       // vertex interpolant values
  std::vector<ElemClass> elem_class;
  std::array<std::vector<int>, 2> active_elems;   // sorted element ids per side
  std::array<std::vector<char>, 2> active_flag;
  std::vector<int> cut_id;            // per element, -1 if uncut
  std::vector<CutElement> cuts;

  bool is_active(int e, Side s) const {
    return active_flag[static_cast<size_t>(side_index(s))][static_cast<size_t>(e)] != 0;
  }
  const CutElement* cut_info(int e) const {
    const int id = cut_id[static_cast<size_t>(e)];
    return id >= 0 ? &cuts[static_cast<size_t>(id)] : nullptr;
  }
  int num_cut() const { return static_cast<int>(cuts.size()); }
};

/// Classify all elements and decompose the cut ones. Vertex values exactly
/// zero carry no side; an element whose three vertex values are all zero is a
/// degenerate configuration and throws.
CutGeometry classify_elements(const Mesh& mesh, const LevelSet& ls);

/// Decomposition of a single element with both strict signs present among
/// `phi_vert`. Edge crossings depend only on the global vertex pair, so
/// adjacent elements reproduce them bitwise.
CutElement decompose_cut_element(const Mesh& mesh, int e, const std::vector<double>& phi_vert);

struct VolPoint {
  Vec2 local;     // reference-triangle coordinates in the parent element
  Vec2 phys;      // undeformed physical coordinates
  double weight;  // undeformed physical measure
};

struct LinePoint {
  Vec2 local;
  Vec2 phys;
  double weight;
  Vec2 normal;  // segment normal, negative -> positive side
};

/// Quadrature over the part of element `e` lying on `side` (empty when the
/// element has no part there; the full element when it is uncut).
std::vector<VolPoint> side_volume_rule(const Mesh& mesh, const CutGeometry& geo, int e, Side side,
                                       int order);

/// Quadrature along the interface segment of cut element `e`.
std::vector<LinePoint> interface_rule(const Mesh& mesh, const CutGeometry& geo, int e, int order);

}  // namespace ucfem
