#pragma once

/// Global continuous Lagrange dof numbering on the background mesh: vertex
/// dofs first (mesh order), then edge dofs (facet order, oriented from the
/// smaller to the larger global vertex id), then element-interior dofs.

#include <vector>

#include "ucfem/lagrange.hpp"
#include "ucfem/mesh.hpp"

namespace ucfem {

struct DofNumbering {
  int degree = 0;
  int ndof = 0;
  int nloc = 0;
  std::vector<int> elem_dofs;  // flattened element -> global maps, nloc each
  std::vector<Vec2> dof_pos;
  std::vector<char> on_boundary;
  std::vector<std::vector<int>> dof_elements;  // containing elements, ascending

  int dof(int e, int k) const { return elem_dofs[static_cast<size_t>(e * nloc + k)]; }
};

DofNumbering number_lagrange_dofs(const Mesh& mesh, int degree);

/// Continuous scalar finite element function on the background mesh.
struct ScalarField {
  const Mesh* mesh = nullptr;
  const DofNumbering* num = nullptr;
  Eigen::VectorXd coef;

  double value(int e, const Vec2& xi) const;
  /// Gradient with respect to undeformed physical coordinates.
  Vec2 grad_phys(int e, const Vec2& xi) const;
  double value_at(const Vec2& x) const;  // locate + evaluate
};

/// Nodal interpolant of an analytic function.
ScalarField interpolate(const Mesh& mesh, const DofNumbering& num,
                        const std::function<double(const Vec2&)>& f);

}  // namespace ucfem
