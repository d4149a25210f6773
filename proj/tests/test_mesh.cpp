#include "doctest.h"

#include <cmath>
#include <set>

#include "ucfem/mesh.hpp"

using namespace ucfem;

TEST_CASE("structured mesh: entity counts and measures") {
  const Rect dom{-1.5, -1.5, 1.5, 1.5};
  for (int n : {1, 3, 8}) {
    const Mesh mesh = build_structured_mesh(dom, n);
    CHECK(mesh.num_vertices() == (n + 1) * (n + 1));
    CHECK(mesh.num_elements() == 2 * n * n);
    // n(n+1) horizontal + n(n+1) vertical + n^2 diagonal edges.
    CHECK(static_cast<int>(mesh.facets.size()) == 3 * n * n + 2 * n);

    double area = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
      CHECK(mesh.area(e) > 0.0);
      area += mesh.area(e);
    }
    CHECK(area == doctest::Approx(dom.width() * dom.height()).epsilon(1e-13));

    const double w = dom.width() / n;
    CHECK(mesh.h == doctest::Approx(w * std::sqrt(2.0)).epsilon(1e-13));
  }
}

TEST_CASE("structured mesh: facet records are consistent") {
  const Mesh mesh = build_structured_mesh({0, 0, 2, 1.5}, 4);
  int boundary = 0;
  for (const Mesh::Facet& f : mesh.facets) {
    CHECK(f.a < f.b);
    CHECK(f.normal.norm() == doctest::Approx(1.0).epsilon(1e-14));
    const Vec2 mid = 0.5 * (mesh.vertex(f.a) + mesh.vertex(f.b));
    if (f.right >= 0) {
      // Normal points from the left into the right element.
      const Vec2 d = mesh.centroid(f.right) - mesh.centroid(f.left);
      CHECK(f.normal.dot(d) > 0.0);
    } else {
      ++boundary;
      const Vec2 d = mid - mesh.centroid(f.left);
      CHECK(f.normal.dot(d) > 0.0);
    }
  }
  CHECK(boundary == 16);  // 4n perimeter edges with n=4
}

TEST_CASE("structured mesh: element maps invert each other") {
  const Mesh mesh = build_structured_mesh({-1, -2, 3, 1}, 5);
  for (int e : {0, 7, 23, mesh.num_elements() - 1}) {
    const Vec2 xi(0.21, 0.37);
    const Vec2 x = mesh.to_physical(e, xi);
    CHECK((mesh.to_local(e, x) - xi).norm() < 1e-13);
    const Mat2 J = mesh.affine_jacobian(e);
    CHECK(std::abs(J.determinant()) == doctest::Approx(2.0 * mesh.area(e)).epsilon(1e-13));
  }
}

TEST_CASE("structured mesh: locate finds the containing element") {
  const Mesh mesh = build_structured_mesh({-1.5, -1.5, 1.5, 1.5}, 7);
  uint64_t s = 12345;
  for (int i = 0; i < 200; ++i) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    const double a = static_cast<double>(s >> 11) * 0x1.0p-53;
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    const double b = static_cast<double>(s >> 11) * 0x1.0p-53;
    const Vec2 x(-1.5 + 3.0 * a, -1.5 + 3.0 * b);
    const int e = mesh.locate(x);
    REQUIRE(e >= 0);
    const Vec2 xi = mesh.to_local(e, x);
    CHECK(xi.x() > -1e-12);
    CHECK(xi.y() > -1e-12);
    CHECK(xi.x() + xi.y() < 1.0 + 1e-12);
  }
}

TEST_CASE("uniform refinement nests the coarse mesh") {
  const Mesh coarse = build_structured_mesh({-1.5, -1.5, 1.5, 1.5}, 3, {Rect{-0.5, -0.5, 0.5, 0.5}});
  const Mesh fine = uniform_refine(coarse);
  CHECK(fine.n == 2 * coarse.n);
  CHECK(fine.num_elements() == 4 * coarse.num_elements());
  CHECK(fine.h == doctest::Approx(0.5 * coarse.h).epsilon(1e-13));
  CHECK(fine.align_boxes.size() == coarse.align_boxes.size());

  // Every coarse vertex appears in the fine mesh.
  std::set<std::pair<double, double>> fv;
  for (const Vec2& v : fine.vertices) fv.emplace(v.x(), v.y());
  for (const Vec2& v : coarse.vertices) CHECK(fv.count({v.x(), v.y()}) == 1);

  // Each fine element lies inside its coarse parent.
  for (int e = 0; e < fine.num_elements(); ++e) {
    const int parent = coarse.locate(fine.centroid(e));
    const Vec2 xi = coarse.to_local(parent, fine.centroid(e));
    CHECK(xi.x() > -1e-12);
    CHECK(xi.x() + xi.y() < 1.0 + 1e-12);
  }
}

TEST_CASE("alignment boxes off the grid are rejected") {
  CHECK_THROWS_AS(build_structured_mesh({-1.5, -1.5, 1.5, 1.5}, 3, {Rect{-0.4, -0.5, 0.5, 0.5}}),
                  std::invalid_argument);
  // Aligned at n=3 (cell width 1.0): box edges on grid lines.
  CHECK_NOTHROW(build_structured_mesh({-1.5, -1.5, 1.5, 1.5}, 3, {Rect{-0.5, -0.5, 0.5, 0.5}}));
}
