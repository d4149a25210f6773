#include "ucfem/fespace.hpp"

namespace ucfem {

CutSpace build_cut_space(const CutGeometry& geo, const DofNumbering& num) {
  CutSpace space;
  space.background = &num;
  for (int s = 0; s < 2; ++s) {
    auto& map = space.bg_to_side[static_cast<size_t>(s)];
    map.assign(static_cast<size_t>(num.ndof), -1);
    int next = 0;
    for (int d = 0; d < num.ndof; ++d) {
      for (int e : num.dof_elements[static_cast<size_t>(d)]) {
        if (geo.active_flag[static_cast<size_t>(s)][static_cast<size_t>(e)]) {
          map[static_cast<size_t>(d)] = next++;
          break;
        }
      }
    }
    space.dim_side[static_cast<size_t>(s)] = next;
  }
  space.dim = space.dim_side[0] + space.dim_side[1];
  return space;
}

DirichletSpace build_dirichlet_space(const DofNumbering& num) {
  DirichletSpace space;
  space.background = &num;
  space.bg_to_idx.assign(static_cast<size_t>(num.ndof), -1);
  for (int d = 0; d < num.ndof; ++d) {
    if (num.on_boundary[static_cast<size_t>(d)]) continue;
    space.bg_to_idx[static_cast<size_t>(d)] = space.dim++;
    space.idx_to_bg.push_back(d);
  }
  return space;
}

Eigen::VectorXd nodal_interpolate(const CutSpace& space, const Mesh& mesh, const Deformation& def,
                                  const std::function<double(const Vec2&)>& u_neg,
                                  const std::function<double(const Vec2&)>& u_pos) {
  const DofNumbering& num = *space.background;
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(space.dim);
  for (int d = 0; d < num.ndof; ++d) {
    const int i_neg = space.global(Side::neg, d);
    const int i_pos = space.global(Side::pos, d);
    if (i_neg < 0 && i_pos < 0) continue;
    // The deformation is continuous, so any containing element maps the node
    // to the same deformed position.
    const int e = num.dof_elements[static_cast<size_t>(d)].front();
    const Vec2 y = def.map(e, mesh.to_local(e, num.dof_pos[static_cast<size_t>(d)]));
    if (i_neg >= 0) coef(i_neg) = u_neg(y);
    if (i_pos >= 0) coef(i_pos) = u_pos(y);
  }
  return coef;
}

}  // namespace ucfem
