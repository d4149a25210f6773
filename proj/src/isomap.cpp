#include "ucfem/isomap.hpp"

#include <cmath>

namespace ucfem {

Vec2 Deformation::displacement(int e, const Vec2& xi) const {
  if (is_identity_on(e)) return Vec2::Zero();
  ShapeValues sv;
  LagrangeBasis::get(q).eval(xi, sv);
  Vec2 d = Vec2::Zero();
  for (int k = 0; k < num.nloc; ++k) d += sv.N(k) * coef.row(num.dof(e, k)).transpose();
  return d;
}

Vec2 Deformation::map(int e, const Vec2& xi) const {
  return mesh->to_physical(e, xi) + displacement(e, xi);
}

namespace {

/// P1 vertex-interpolant value at a reference point of element e.
double p1_value(const Mesh& mesh, const std::vector<double>& phi_vert, int e, const Vec2& xi) {
  const auto& el = mesh.elements[static_cast<size_t>(e)];
  const double l1 = xi.x(), l2 = xi.y(), l0 = 1.0 - l1 - l2;
  return l0 * phi_vert[static_cast<size_t>(el[0])] + l1 * phi_vert[static_cast<size_t>(el[1])] +
         l2 * phi_vert[static_cast<size_t>(el[2])];
}

}  // namespace

Deformation build_deformation(const Mesh& mesh, const CutGeometry& geo, const LevelSet& ls, int q,
                              double c_clamp, double root_tol) {
  require(q >= 1 && q <= 3, "build_deformation: q must be in 1..3");
  Deformation def;
  def.mesh = &mesh;
  def.q = q;
  def.num = number_lagrange_dofs(mesh, q);
  def.coef = Eigen::MatrixX2d::Zero(def.num.ndof, 2);
  def.elem_displaced.assign(static_cast<size_t>(mesh.num_elements()), 0);
  if (q == 1) return def;  // vertex values already match the vertex interpolant

  const ScalarField phi_q = interpolate(mesh, def.num, ls.value);
  const LagrangeBasis& basis = LagrangeBasis::get(q);
  const double reach = c_clamp * mesh.h;

  auto grad_at = [&](const Vec2& x) {
    const int e = mesh.locate(x);
    return phi_q.grad_phys(e, mesh.to_local(e, x));
  };

  std::vector<char> visited(static_cast<size_t>(def.num.ndof), 0);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    if (geo.elem_class[static_cast<size_t>(e)] != ElemClass::cut) continue;
    for (int k = 0; k < def.num.nloc; ++k) {
      const int d = def.num.dof(e, k);
      if (visited[static_cast<size_t>(d)]) continue;
      visited[static_cast<size_t>(d)] = 1;

      const Vec2 x0 = def.num.dof_pos[static_cast<size_t>(d)];
      const double target = p1_value(mesh, geo.phi_vert, e, basis.nodes()[static_cast<size_t>(k)]);

      // Search direction: normalized mean discrete gradient over the cut
      // elements sharing the node (single-valued inside one element).
      Vec2 G = Vec2::Zero();
      for (int ce : def.num.dof_elements[static_cast<size_t>(d)]) {
        if (geo.elem_class[static_cast<size_t>(ce)] != ElemClass::cut) continue;
        G += phi_q.grad_phys(ce, mesh.to_local(ce, x0));
      }
      if (G.norm() < 1e-12) {
        ++def.undisplaced;
        continue;
      }
      G.normalize();

      auto g = [&](double s) { return phi_q.value_at(x0 + s * G) - target; };
      const double g0 = g(0.0);
      if (std::abs(g0) <= root_tol) continue;

      // Bracket on the side where the increasing direction crosses target.
      double sa, sb;  // g(sa) < 0 < g(sb)
      if (g0 > 0.0) {
        const double gl = g(-reach);
        if (!(gl < 0.0)) {
          ++def.undisplaced;
          continue;
        }
        sa = -reach;
        sb = 0.0;
      } else {
        const double gr = g(reach);
        if (!(gr > 0.0)) {
          ++def.undisplaced;
          continue;
        }
        sa = 0.0;
        sb = reach;
      }

      // Safeguarded Newton: steps that leave the bracket fall back to
      // bisection; the bracket keeps shrinking either way.
      double s = (g0 > 0.0) ? sb : sa;
      double gs = g0;
      for (int iter = 0; iter < 100 && std::abs(gs) > root_tol; ++iter) {
        const double lo = std::min(sa, sb), hi = std::max(sa, sb);
        double snew = 0.0;
        const double dg = grad_at(x0 + s * G).dot(G);
        bool ok = std::abs(dg) > 1e-14;
        if (ok) {
          snew = s - gs / dg;
          ok = snew > lo && snew < hi;
        }
        if (!ok) snew = 0.5 * (sa + sb);
        const double gnew = g(snew);
        if (gnew < 0.0) sa = snew;
        else sb = snew;
        s = snew;
        gs = gnew;
        if (std::abs(sb - sa) < 1e-15) break;
      }
      if (std::abs(gs) > root_tol) {
        ++def.undisplaced;
        continue;
      }

      def.coef.row(d) = (s * G).transpose();
      def.max_displacement = std::max(def.max_displacement, std::abs(s));
      for (int ce : def.num.dof_elements[static_cast<size_t>(d)]) def.elem_displaced[static_cast<size_t>(ce)] = 1;
    }
  }
  return def;
}

PushForward push_forward(const Deformation& def, int e, const Vec2& xi, bool need_hessian) {
  PushForward pf;
  if (def.is_identity_on(e)) {
    pf.y = def.mesh->to_physical(e, xi);
    return pf;
  }
  pf.curved = true;

  ShapeValues sv;
  LagrangeBasis::get(def.q).eval(xi, sv, need_hessian);
  const Mat2 Ainv = def.mesh->affine_jacobian(e).inverse();

  // Physical derivatives of the displacement field.
  Eigen::Matrix<double, Eigen::Dynamic, 2> dN_phys = sv.dN * Ainv;  // row k: grad_x N_k
  Mat2 grad_D = Mat2::Zero();  // (a,b) = d D_a / d x_b
  Vec2 dval = Vec2::Zero();
  for (int k = 0; k < def.num.nloc; ++k) {
    const Vec2 c = def.coef.row(def.num.dof(e, k)).transpose();
    dval += sv.N(k) * c;
    grad_D += c * dN_phys.row(k);
  }
  pf.y = def.mesh->to_physical(e, xi) + dval;
  pf.J = Mat2::Identity() + grad_D;
  pf.detJ = pf.J.determinant();
  pf.JinvT = pf.J.inverse().transpose();

  if (need_hessian) {
    for (int k = 0; k < def.num.nloc; ++k) {
      const Mat2 Hk = Ainv.transpose() * sv.d2N[static_cast<size_t>(k)] * Ainv;
      const int d = def.num.dof(e, k);
      pf.H[0] += def.coef(d, 0) * Hk;
      pf.H[1] += def.coef(d, 1) * Hk;
    }
  }
  return pf;
}

double geometry_probe(const Mesh& mesh, const CutGeometry& geo, const Deformation& def,
                      const LevelSet& ls, int order) {
  double probe = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    if (geo.elem_class[static_cast<size_t>(e)] != ElemClass::cut) continue;
    for (const LinePoint& p : interface_rule(mesh, geo, e, order))
      probe = std::max(probe, std::abs(ls(def.map(e, p.local))));
  }
  return probe;
}

double deformed_side_area(const Mesh& mesh, const CutGeometry& geo, const Deformation& def,
                          Side side, int order) {
  double area = 0.0;
  for (int e : geo.active_elems[static_cast<size_t>(side_index(side))])
    for (const VolPoint& p : side_volume_rule(mesh, geo, e, side, order))
      area += p.weight * push_forward(def, e, p.local).detJ;
  return area;
}

}  // namespace ucfem
