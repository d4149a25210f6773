#include "ucfem/cutgeom.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ucfem {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

/// Interface crossing on the edge between global vertices a and b. Computed
/// from the sorted pair so both adjacent elements obtain the same point.
Vec2 edge_crossing(const Mesh& mesh, int a, int b, const std::vector<double>& phi) {
  if (a > b) std::swap(a, b);
  const double fa = phi[static_cast<size_t>(a)];
  const double fb = phi[static_cast<size_t>(b)];
  const double t = fa / (fa - fb);
  if (!(t > 0.0 && t < 1.0))
    throw std::runtime_error("decompose_cut_element: crossing parameter degenerate");
  return mesh.vertex(a) + t * (mesh.vertex(b) - mesh.vertex(a));
}

}  // namespace

CutElement decompose_cut_element(const Mesh& mesh, int e, const std::vector<double>& phi) {
  const auto& el = mesh.elements[static_cast<size_t>(e)];
  std::array<int, 3> sgn;
  for (int k = 0; k < 3; ++k) sgn[static_cast<size_t>(k)] = sign_of(phi[static_cast<size_t>(el[static_cast<size_t>(k)])]);

  std::vector<int> neg, pos, zero;
  for (int k = 0; k < 3; ++k) {
    if (sgn[static_cast<size_t>(k)] < 0) neg.push_back(k);
    else if (sgn[static_cast<size_t>(k)] > 0) pos.push_back(k);
    else zero.push_back(k);
  }
  require(!neg.empty() && !pos.empty(), "decompose_cut_element: element is not cut");

  CutElement cut;
  auto P = [&](int k) { return mesh.vertex(el[static_cast<size_t>(k)]); };
  auto crossing = [&](int k1, int k2) {
    return edge_crossing(mesh, el[static_cast<size_t>(k1)], el[static_cast<size_t>(k2)], phi);
  };

  if (zero.size() == 1) {
    // Interface runs from the zero vertex to the crossing on the opposite
    // edge: one sub-triangle per side.
    const int kz = zero[0], kn = neg[0], kp = pos[0];
    const Vec2 c = crossing(kn, kp);
    cut.tris[side_index(Side::neg)].push_back({{P(kn), c, P(kz)}});
    cut.tris[side_index(Side::pos)].push_back({{P(kp), P(kz), c}});
    cut.seg_a = P(kz);
    cut.seg_b = c;
  } else {
    // Generic case: the minority-sign vertex is clipped off; the other side
    // is a quadrilateral split into two sub-triangles.
    const bool lone_neg = neg.size() == 1;
    const int kl = lone_neg ? neg[0] : pos[0];
    const auto& majority = lone_neg ? pos : neg;
    const int ka = majority[0], kb = majority[1];
    const Vec2 ca = crossing(kl, ka);
    const Vec2 cb = crossing(kl, kb);
    const Side lone_side = lone_neg ? Side::neg : Side::pos;
    cut.tris[side_index(lone_side)].push_back({{P(kl), ca, cb}});
    cut.tris[side_index(other_side(lone_side))].push_back({{P(ka), P(kb), cb}});
    cut.tris[side_index(other_side(lone_side))].push_back({{P(ka), cb, ca}});
    cut.seg_a = ca;
    cut.seg_b = cb;
  }

  // Orientation from the elementwise-constant vertex-interpolant gradient,
  // which points from the negative into the positive side.
  Eigen::Matrix<double, 2, 3> ref_grads;
  ref_grads << -1, 1, 0, -1, 0, 1;
  const Mat2 JinvT = mesh.affine_jacobian(e).inverse().transpose();
  Vec2 grad = Vec2::Zero();
  for (int k = 0; k < 3; ++k)
    grad += phi[static_cast<size_t>(el[static_cast<size_t>(k)])] * (JinvT * ref_grads.col(k));
  require(grad.norm() > 0, "decompose_cut_element: vanishing interpolant gradient");
  cut.normal_lin = grad.normalized();
  return cut;
}

CutGeometry classify_elements(const Mesh& mesh, const LevelSet& ls) {
  CutGeometry geo;
  geo.phi_vert.resize(static_cast<size_t>(mesh.num_vertices()));
  for (int v = 0; v < mesh.num_vertices(); ++v)
    geo.phi_vert[static_cast<size_t>(v)] = ls(mesh.vertex(v));

  const int ne = mesh.num_elements();
  geo.elem_class.resize(static_cast<size_t>(ne));
  geo.cut_id.assign(static_cast<size_t>(ne), -1);
  for (int s = 0; s < 2; ++s) geo.active_flag[static_cast<size_t>(s)].assign(static_cast<size_t>(ne), 0);

  for (int e = 0; e < ne; ++e) {
    const auto& el = mesh.elements[static_cast<size_t>(e)];
    bool has_neg = false, has_pos = false, all_zero = true;
    for (int k = 0; k < 3; ++k) {
      const int s = sign_of(geo.phi_vert[static_cast<size_t>(el[static_cast<size_t>(k)])]);
      has_neg |= s < 0;
      has_pos |= s > 0;
      all_zero &= s == 0;
    }
    if (all_zero) {
      std::ostringstream msg;
      msg << "classify_elements: level set vanishes on all vertices of element " << e;
      throw std::runtime_error(msg.str());
    }
    ElemClass cls;
    if (has_neg && has_pos) {
      cls = ElemClass::cut;
      geo.cut_id[static_cast<size_t>(e)] = static_cast<int>(geo.cuts.size());
      geo.cuts.push_back(decompose_cut_element(mesh, e, geo.phi_vert));
      geo.active_flag[0][static_cast<size_t>(e)] = 1;
      geo.active_flag[1][static_cast<size_t>(e)] = 1;
    } else if (has_neg) {
      cls = ElemClass::neg;
      geo.active_flag[0][static_cast<size_t>(e)] = 1;
    } else {
      cls = ElemClass::pos;
      geo.active_flag[1][static_cast<size_t>(e)] = 1;
    }
    geo.elem_class[static_cast<size_t>(e)] = cls;
  }

  for (int s = 0; s < 2; ++s)
    for (int e = 0; e < ne; ++e)
      if (geo.active_flag[static_cast<size_t>(s)][static_cast<size_t>(e)]) geo.active_elems[static_cast<size_t>(s)].push_back(e);
  return geo;
}

std::vector<VolPoint> side_volume_rule(const Mesh& mesh, const CutGeometry& geo, int e, Side side,
                                       int order) {
  std::vector<VolPoint> out;
  const ElemClass cls = geo.elem_class[static_cast<size_t>(e)];
  const TriangleRule& rule = triangle_rule(order);

  const ElemClass full = side == Side::neg ? ElemClass::neg : ElemClass::pos;
  if (cls == full) {
    const double scale = 2.0 * mesh.area(e);
    out.reserve(rule.points.size());
    for (size_t q = 0; q < rule.points.size(); ++q) {
      VolPoint p;
      p.local = rule.points[q];
      p.phys = mesh.to_physical(e, p.local);
      p.weight = rule.weights[q] * scale;
      out.push_back(p);
    }
    return out;
  }
  if (cls != ElemClass::cut) return out;

  const CutElement& cut = *geo.cut_info(e);
  for (const SubTri& tri : cut.tris[static_cast<size_t>(side_index(side))]) {
    const double scale = 2.0 * tri.area();
    for (size_t q = 0; q < rule.points.size(); ++q) {
      VolPoint p;
      const Vec2& xi = rule.points[q];
      p.phys = tri.v[0] + xi.x() * (tri.v[1] - tri.v[0]) + xi.y() * (tri.v[2] - tri.v[0]);
      p.local = mesh.to_local(e, p.phys);
      p.weight = rule.weights[q] * scale;
      out.push_back(p);
    }
  }
  return out;
}

std::vector<LinePoint> interface_rule(const Mesh& mesh, const CutGeometry& geo, int e, int order) {
  std::vector<LinePoint> out;
  const CutElement* cut = geo.cut_info(e);
  require(cut != nullptr, "interface_rule: element is not cut");
  const SegmentRule& rule = segment_rule(order);
  const Vec2 d = cut->seg_b - cut->seg_a;
  const double len = d.norm();
  out.reserve(rule.points.size());
  for (size_t q = 0; q < rule.points.size(); ++q) {
    LinePoint p;
    p.phys = cut->seg_a + rule.points[q] * d;
    p.local = mesh.to_local(e, p.phys);
    p.weight = rule.weights[q] * len;
    p.normal = cut->normal_lin;
    out.push_back(p);
  }
  return out;
}

}  // namespace ucfem
