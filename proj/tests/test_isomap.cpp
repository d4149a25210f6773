#include "doctest.h"

#include <cmath>

#include "ucfem/isomap.hpp"

using namespace ucfem;

namespace {

struct Setup {
  Mesh mesh;
  CutGeometry geo;
  LevelSet ls;
};

Setup circle_setup(int n) {
  Setup s;
  s.mesh = build_structured_mesh({-1.5, -1.5, 1.5, 1.5}, n);
  s.ls = make_norm_levelset(2);
  s.geo = classify_elements(s.mesh, s.ls);
  return s;
}

}  // namespace

TEST_CASE("deformation: degree 1 is the identity") {
  const Setup s = circle_setup(8);
  const Deformation def = build_deformation(s.mesh, s.geo, s.ls, 1);
  CHECK(def.max_displacement == 0.0);
  for (int e = 0; e < s.mesh.num_elements(); ++e) CHECK(def.is_identity_on(e));
}

TEST_CASE("deformation: identity away from the cut band") {
  const Setup s = circle_setup(12);
  const Deformation def = build_deformation(s.mesh, s.geo, s.ls, 2);
  CHECK(def.undisplaced == 0);
  for (int e = 0; e < s.mesh.num_elements(); ++e) {
    if (!def.is_identity_on(e)) continue;
    const Vec2 xi(0.3, 0.3);
    const PushForward pf = push_forward(def, e, xi);
    CHECK((pf.y - s.mesh.to_physical(e, xi)).norm() == 0.0);
    CHECK((pf.J - Mat2::Identity()).norm() == 0.0);
    CHECK(pf.detJ == 1.0);
    CHECK(!pf.curved);
  }
  // Elements touching the cut band carry displacement somewhere.
  int curved = 0;
  for (int e = 0; e < s.mesh.num_elements(); ++e)
    if (!def.is_identity_on(e)) ++curved;
  CHECK(curved > 0);
}

TEST_CASE("deformation: zeroes the mapped level set at degree-q accuracy") {
  // Interface alignment residual max |phi(Theta(x))| decays like h^(q+1); the
  // displacement itself scales like the interpolation gap h^2. Max-norm
  // quantities wobble between levels, so the slope is taken base-to-finest.
  for (int q : {2, 3}) {
    std::vector<double> probe, disp;
    for (int n : {8, 16, 32, 64}) {
      const Setup s = circle_setup(n);
      const Deformation def = build_deformation(s.mesh, s.geo, s.ls, q);
      probe.push_back(geometry_probe(s.mesh, s.geo, def, s.ls, 4));
      disp.push_back(def.max_displacement);
    }
    const double slope_p = std::log2(probe.front() / probe.back()) / 3.0;
    const double slope_d = std::log2(disp.front() / disp.back()) / 3.0;
    CHECK(slope_p > q + 0.5);
    CHECK(slope_d > 1.6);
  }
}

TEST_CASE("deformation: deformed side areas converge to the disk at rate q+1") {
  constexpr double kPi = 3.14159265358979323846;
  for (int q : {1, 2}) {
    std::vector<double> err;
    for (int n : {8, 16, 32, 64}) {
      const Setup s = circle_setup(n);
      const Deformation def = build_deformation(s.mesh, s.geo, s.ls, q);
      err.push_back(std::abs(deformed_side_area(s.mesh, s.geo, def, Side::neg, 2 * q + 2) - kPi));
    }
    CHECK(std::log2(err.front() / err.back()) / 3.0 > q + 0.5);
  }
}

TEST_CASE("push forward: jacobian and hessian match finite differences") {
  const Setup s = circle_setup(10);
  const Deformation def = build_deformation(s.mesh, s.geo, s.ls, 3);
  int tested = 0;
  const double d = 1e-5;
  for (int e = 0; e < s.mesh.num_elements() && tested < 5; ++e) {
    if (def.is_identity_on(e)) continue;
    ++tested;
    const Vec2 xi(0.25, 0.35);
    const PushForward pf = push_forward(def, e, xi, true);
    CHECK((pf.y - def.map(e, xi)).norm() < 1e-14);
    CHECK(pf.detJ == doctest::Approx(pf.J.determinant()).epsilon(1e-13));
    CHECK((pf.JinvT - pf.J.inverse().transpose()).norm() < 1e-10);

    // Reference-to-physical chain: differentiate the map through the affine
    // element geometry to compare against J and H in physical coordinates.
    const Mat2 A = s.mesh.affine_jacobian(e);
    const Mat2 Ainv = A.inverse();
    for (int c = 0; c < 2; ++c) {
      Vec2 er = Vec2::Zero();
      er(c) = d;
      for (int comp = 0; comp < 2; ++comp) {
        const double fd =
            (def.map(e, xi + er)(comp) - def.map(e, xi - er)(comp)) / (2 * d);
        // dTheta_comp/dx = (dTheta_comp/dxi) Ainv; compare one reference column.
        const double an = (pf.J.row(comp) * A)(c);
        CHECK(fd == doctest::Approx(an).epsilon(1e-6));
      }
    }
    for (int comp = 0; comp < 2; ++comp) {
      Mat2 fdh;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          Vec2 ea = Vec2::Zero(), eb = Vec2::Zero();
          ea(a) = d;
          eb(b) = d;
          fdh(a, b) = (def.map(e, xi + ea + eb)(comp) - def.map(e, xi + ea - eb)(comp) -
                       def.map(e, xi - ea + eb)(comp) + def.map(e, xi - ea - eb)(comp)) /
                      (4 * d * d);
        }
      // H is stored in physical coordinates: pull the reference FD back.
      const Mat2 an = A.transpose() * pf.H[static_cast<size_t>(comp)] * A;
      CHECK((fdh - an).norm() < 5e-4);
    }
  }
  CHECK(tested == 5);
}
