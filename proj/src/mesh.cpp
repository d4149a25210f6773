#include "ucfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace ucfem {

Vec2 Mesh::centroid(int e) const {
  const auto& el = elements[static_cast<size_t>(e)];
  return (vertex(el[0]) + vertex(el[1]) + vertex(el[2])) / 3.0;
}

double Mesh::area(int e) const {
  const auto& el = elements[static_cast<size_t>(e)];
  const Vec2 d1 = vertex(el[1]) - vertex(el[0]);
  const Vec2 d2 = vertex(el[2]) - vertex(el[0]);
  return 0.5 * (d1.x() * d2.y() - d1.y() * d2.x());
}

Mat2 Mesh::affine_jacobian(int e) const {
  const auto& el = elements[static_cast<size_t>(e)];
  Mat2 J;
  J.col(0) = vertex(el[1]) - vertex(el[0]);
  J.col(1) = vertex(el[2]) - vertex(el[0]);
  return J;
}

Vec2 Mesh::to_physical(int e, const Vec2& xi) const {
  const auto& el = elements[static_cast<size_t>(e)];
  return vertex(el[0]) + affine_jacobian(e) * xi;
}

Vec2 Mesh::to_local(int e, const Vec2& x) const {
  const auto& el = elements[static_cast<size_t>(e)];
  return affine_jacobian(e).inverse() * (x - vertex(el[0]));
}

int Mesh::locate(const Vec2& x) const {
  require(n > 0, "Mesh::locate: structured metadata missing");
  const double wx = domain.width() / n;
  const double wy = domain.height() / n;
  int i = static_cast<int>(std::floor((x.x() - domain.x0) / wx));
  int j = static_cast<int>(std::floor((x.y() - domain.y0) / wy));
  i = std::clamp(i, 0, n - 1);
  j = std::clamp(j, 0, n - 1);
  // Cell-local coordinates decide between the two triangles sharing the
  // lower-left -> upper-right diagonal.
  const double lx = (x.x() - (domain.x0 + i * wx)) / wx;
  const double ly = (x.y() - (domain.y0 + j * wy)) / wy;
  const int cell = 2 * (j * n + i);
  return (ly <= lx) ? cell : cell + 1;
}

namespace {

void check_alignment(const Rect& domain, int n, const Rect& box) {
  const double wx = domain.width() / n;
  const double wy = domain.height() / n;
  const double tol = 1e-10;
  auto on_grid = [tol](double coord, double origin, double w) {
    const double t = (coord - origin) / w;
    return std::abs(t - std::round(t)) <= tol;
  };
  const bool ok = on_grid(box.x0, domain.x0, wx) && on_grid(box.x1, domain.x0, wx) &&
                  on_grid(box.y0, domain.y0, wy) && on_grid(box.y1, domain.y0, wy);
  if (!ok) {
    std::ostringstream msg;
    msg << "build_structured_mesh: alignment box [" << box.x0 << "," << box.x1 << "]x[" << box.y0
        << "," << box.y1 << "] does not sit on grid lines for n=" << n;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

Mesh build_structured_mesh(const Rect& domain, int n, std::vector<Rect> align_boxes) {
  if (n < 1) throw std::invalid_argument("build_structured_mesh: n must be >= 1");
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0))
    throw std::invalid_argument("build_structured_mesh: empty domain");
  for (const auto& box : align_boxes) check_alignment(domain, n, box);

  Mesh mesh;
  mesh.domain = domain;
  mesh.n = n;
  mesh.align_boxes = std::move(align_boxes);

  const double wx = domain.width() / n;
  const double wy = domain.height() / n;

  mesh.vertices.reserve(static_cast<size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.emplace_back(domain.x0 + i * wx, domain.y0 + j * wy);

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  mesh.elements.reserve(static_cast<size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.elements.push_back({v00, v10, v11});  // below the diagonal
      mesh.elements.push_back({v00, v11, v01});  // above the diagonal
    }
  }

  // Edge table: deterministic order by sorted vertex pair.
  std::map<std::pair<int, int>, std::array<int, 2>> edge_elems;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.elements[static_cast<size_t>(e)];
    for (int k = 0; k < 3; ++k) {
      const int a = std::min(el[k], el[(k + 1) % 3]);
      const int b = std::max(el[k], el[(k + 1) % 3]);
      auto [it, inserted] = edge_elems.try_emplace({a, b}, std::array<int, 2>{e, -1});
      if (!inserted) it->second[1] = e;
    }
  }

  mesh.h = 0.0;
  mesh.facets.reserve(edge_elems.size());
  for (const auto& [key, elems] : edge_elems) {
    Mesh::Facet f;
    f.a = key.first;
    f.b = key.second;
    f.left = elems[0];
    f.right = elems[1];
    const Vec2 edge = mesh.vertex(f.b) - mesh.vertex(f.a);
    mesh.h = std::max(mesh.h, edge.norm());
    Vec2 nrm = perp_cw(edge).normalized();
    const Vec2 away = mesh.vertex(f.a) - mesh.centroid(f.left);
    if (nrm.dot(away) < 0) nrm = -nrm;  // oriented out of `left`
    f.normal = nrm;
    mesh.facets.push_back(f);
  }
  return mesh;
}

Mesh uniform_refine(const Mesh& mesh) {
  require(mesh.n > 0, "uniform_refine: structured metadata missing");
  return build_structured_mesh(mesh.domain, 2 * mesh.n, mesh.align_boxes);
}

}  // namespace ucfem
