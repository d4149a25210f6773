#pragma once

/// Isoparametric mesh deformation of order q. Nodes of cut elements are moved
/// along the discrete level set gradient until the degree-q interpolant there
/// matches the vertex interpolant value at the original node, which aligns the
/// mapped piecewise-linear interface with the degree-q zero set. All other
/// nodes stay fixed; continuity spreads the displacement exactly one element
/// layer beyond the cut band.

#include "ucfem/cutgeom.hpp"
#include "ucfem/numbering.hpp"

namespace ucfem {

struct Deformation {
  const Mesh* mesh = nullptr;
  int q = 1;
  DofNumbering num;             // degree-q numbering
  Eigen::MatrixX2d coef;        // nodal displacements
  std::vector<char> elem_displaced;
  int undisplaced = 0;          // nodes skipped for lack of a bracketing sign change
  double max_displacement = 0;

  bool is_identity_on(int e) const { return elem_displaced[static_cast<size_t>(e)] == 0; }
  Vec2 displacement(int e, const Vec2& xi) const;
  /// Deformed position of the reference point xi of element e.
  Vec2 map(int e, const Vec2& xi) const;
};

/// Derivatives of the deformation at one reference point, used to push
/// integrals and basis derivatives onto the curved configuration.
struct PushForward {
  Vec2 y = Vec2::Zero();     // mapped point
  Mat2 J = Mat2::Identity(); // dTheta/dx
  double detJ = 1.0;
  Mat2 JinvT = Mat2::Identity();
  std::array<Mat2, 2> H = {Mat2::Zero(), Mat2::Zero()};  // Hessians of the components
  bool curved = false;
};

Deformation build_deformation(const Mesh& mesh, const CutGeometry& geo, const LevelSet& ls, int q,
                              double c_clamp = 0.45, double root_tol = 1e-12);

PushForward push_forward(const Deformation& def, int e, const Vec2& xi, bool need_hessian = false);

/// max |phi(Theta(x))| over the mapped interface quadrature points.
double geometry_probe(const Mesh& mesh, const CutGeometry& geo, const Deformation& def,
                      const LevelSet& ls, int order);

/// Area of the deformed discrete subdomain on `side`.
double deformed_side_area(const Mesh& mesh, const CutGeometry& geo, const Deformation& def,
                          Side side, int order);

}  // namespace ucfem
