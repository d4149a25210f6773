#include "ucfem/numbering.hpp"

#include <algorithm>
#include <map>

namespace ucfem {

DofNumbering number_lagrange_dofs(const Mesh& mesh, int degree) {
  const LagrangeBasis& basis = LagrangeBasis::get(degree);
  DofNumbering num;
  num.degree = degree;
  num.nloc = basis.num_nodes();

  const int nv = mesh.num_vertices();
  const int nf = static_cast<int>(mesh.facets.size());
  const int per_edge = degree - 1;
  const int per_elem = degree == 3 ? 1 : 0;
  num.ndof = nv + nf * per_edge + mesh.num_elements() * per_elem;

  std::map<std::pair<int, int>, int> edge_index;
  for (int f = 0; f < nf; ++f)
    edge_index[{mesh.facets[static_cast<size_t>(f)].a, mesh.facets[static_cast<size_t>(f)].b}] = f;

  num.dof_pos.assign(static_cast<size_t>(num.ndof), Vec2::Zero());
  num.on_boundary.assign(static_cast<size_t>(num.ndof), 0);
  for (int v = 0; v < nv; ++v) num.dof_pos[static_cast<size_t>(v)] = mesh.vertex(v);
  for (int f = 0; f < nf; ++f) {
    const auto& facet = mesh.facets[static_cast<size_t>(f)];
    const Vec2 pa = mesh.vertex(facet.a), pb = mesh.vertex(facet.b);
    for (int k = 0; k < per_edge; ++k) {
      const int d = nv + f * per_edge + k;
      num.dof_pos[static_cast<size_t>(d)] = pa + (static_cast<double>(k + 1) / degree) * (pb - pa);
      num.on_boundary[static_cast<size_t>(d)] = facet.right < 0;
    }
    if (facet.right < 0) {
      num.on_boundary[static_cast<size_t>(facet.a)] = 1;
      num.on_boundary[static_cast<size_t>(facet.b)] = 1;
    }
  }

  num.elem_dofs.assign(static_cast<size_t>(mesh.num_elements() * num.nloc), -1);
  const std::array<std::pair<int, int>, 3> local_edges = {{{0, 1}, {1, 2}, {0, 2}}};
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.elements[static_cast<size_t>(e)];
    int slot = 0;
    auto put = [&](int g) { num.elem_dofs[static_cast<size_t>(e * num.nloc + slot++)] = g; };
    for (int k = 0; k < 3; ++k) put(el[static_cast<size_t>(k)]);
    for (const auto& [la, lb] : local_edges) {
      const int ga = el[static_cast<size_t>(la)], gb = el[static_cast<size_t>(lb)];
      const int f = edge_index.at({std::min(ga, gb), std::max(ga, gb)});
      for (int k = 0; k < per_edge; ++k) {
        // Edge dofs are stored oriented min -> max global vertex; flip when
        // the local edge walks the other way.
        const int kk = ga < gb ? k : per_edge - 1 - k;
        put(nv + f * per_edge + kk);
      }
    }
    for (int k = 0; k < per_elem; ++k) {
      const int d = nv + nf * per_edge + e * per_elem + k;
      put(d);
      num.dof_pos[static_cast<size_t>(d)] = mesh.to_physical(e, basis.nodes()[static_cast<size_t>(num.nloc - per_elem + k)]);
    }
  }

  num.dof_elements.assign(static_cast<size_t>(num.ndof), {});
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int k = 0; k < num.nloc; ++k) num.dof_elements[static_cast<size_t>(num.dof(e, k))].push_back(e);
  return num;
}

double ScalarField::value(int e, const Vec2& xi) const {
  const LagrangeBasis& basis = LagrangeBasis::get(num->degree);
  ShapeValues sv;
  basis.eval(xi, sv);
  double out = 0.0;
  for (int k = 0; k < num->nloc; ++k) out += coef(num->dof(e, k)) * sv.N(k);
  return out;
}

Vec2 ScalarField::grad_phys(int e, const Vec2& xi) const {
  const LagrangeBasis& basis = LagrangeBasis::get(num->degree);
  ShapeValues sv;
  basis.eval(xi, sv);
  Vec2 ref = Vec2::Zero();
  for (int k = 0; k < num->nloc; ++k) ref += coef(num->dof(e, k)) * sv.dN.row(k).transpose();
  return mesh->affine_jacobian(e).inverse().transpose() * ref;
}

double ScalarField::value_at(const Vec2& x) const {
  const int e = mesh->locate(x);
  return value(e, mesh->to_local(e, x));
}

ScalarField interpolate(const Mesh& mesh, const DofNumbering& num,
                        const std::function<double(const Vec2&)>& f) {
  ScalarField field;
  field.mesh = &mesh;
  field.num = &num;
  field.coef.resize(num.ndof);
  for (int d = 0; d < num.ndof; ++d) field.coef(d) = f(num.dof_pos[static_cast<size_t>(d)]);
  return field;
}

}  // namespace ucfem
