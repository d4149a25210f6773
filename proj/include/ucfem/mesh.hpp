#pragma once

/// Structured simplicial background meshes on axis-aligned rectangles.
/// Every grid cell is split by the diagonal from its lower-left to its
/// upper-right corner; uniform refinement reproduces the same layout at
/// doubled resolution, so element lookup stays O(1).

#include <array>
#include <vector>

#include "ucfem/common.hpp"

namespace ucfem {

struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(const Vec2& p, double tol = 0.0) const {
    return p.x() >= x0 - tol && p.x() <= x1 + tol && p.y() >= y0 - tol && p.y() <= y1 + tol;
  }
};

struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> elements;  // counterclockwise vertex ids

  /// One record per edge. Interior edges have right >= 0 and a unit normal
  /// pointing from `left` into `right`; boundary edges have right == -1 and an
  /// outward normal.
  struct Facet {
    int a = -1, b = -1;       // vertex ids, a < b
    int left = -1, right = -1;
    Vec2 normal = Vec2::Zero();
  };
  std::vector<Facet> facets;

  double h = 0.0;  // maximum edge length

  // Structured-grid metadata (n x n cells over `domain`).
  Rect domain;
  int n = 0;
  std::vector<Rect> align_boxes;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }

  Vec2 vertex(int v) const { return vertices[static_cast<size_t>(v)]; }
  Vec2 centroid(int e) const;
  double area(int e) const;

  /// Columns of the affine element map x = v0 + J * xi, xi in the reference
  /// triangle (0,0),(1,0),(0,1).
  Mat2 affine_jacobian(int e) const;
  Vec2 to_physical(int e, const Vec2& xi) const;
  Vec2 to_local(int e, const Vec2& x) const;

  /// Element containing x (structured lookup; x clamped into the domain).
  int locate(const Vec2& x) const;
};

/// Build the n x n structured triangle mesh on `domain`. Every rectangle in
/// `align_boxes` must have all four edge coordinates on grid lines; violations
/// throw std::invalid_argument.
Mesh build_structured_mesh(const Rect& domain, int n, std::vector<Rect> align_boxes = {});

/// Halve the mesh width: returns the structured mesh with 2n cells per axis.
/// Every parent triangle is the union of four congruent children.
Mesh uniform_refine(const Mesh& mesh);

}  // namespace ucfem
