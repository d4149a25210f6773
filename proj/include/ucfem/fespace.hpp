#pragma once

/// Discrete spaces on the cut configuration: the doubled cut space carries one
/// copy of the background Lagrange space per active mesh (side-1 block first,
/// then side 2), the dual space is the background space with boundary dofs
/// removed.

#include "ucfem/cutgeom.hpp"
#include "ucfem/isomap.hpp"
#include "ucfem/numbering.hpp"

namespace ucfem {

struct CutSpace {
  const DofNumbering* background = nullptr;
  std::array<std::vector<int>, 2> bg_to_side;  // background dof -> block-local index or -1
  std::array<int, 2> dim_side = {0, 0};
  int dim = 0;

  /// Global cut-space index of a background dof on `side`; -1 when the dof is
  /// not supported on that active mesh.
  int global(Side s, int bg) const {
    const int idx = bg_to_side[static_cast<size_t>(side_index(s))][static_cast<size_t>(bg)];
    if (idx < 0) return -1;
    return s == Side::neg ? idx : dim_side[0] + idx;
  }
};

struct DirichletSpace {
  const DofNumbering* background = nullptr;
  std::vector<int> bg_to_idx;  // -1 on the domain boundary
  std::vector<int> idx_to_bg;
  int dim = 0;
};

CutSpace build_cut_space(const CutGeometry& geo, const DofNumbering& num);
DirichletSpace build_dirichlet_space(const DofNumbering& num);

/// Nodal interpolation into the cut space: each side's coefficients sample the
/// side's analytic branch at the deformed node positions.
Eigen::VectorXd nodal_interpolate(const CutSpace& space, const Mesh& mesh, const Deformation& def,
                                  const std::function<double(const Vec2&)>& u_neg,
                                  const std::function<double(const Vec2&)>& u_pos);

}  // namespace ucfem
