#pragma once

/// Assembly of the stabilized saddle-point discretization. Unknowns are the
/// doubled cut-space field u and the zero-trace dual field z; the system reads
///   [ S + M_omega   A^T ] [u]   [b_u]
///   [ A            -S*  ] [z] = [b_z]
/// with S the primal stabilization, M_omega the data-fidelity mass matrix, A
/// the interface-coupled bilinear form tested with dual functions, and S* the
/// dual stabilization. All volume and interface integrals run through the
/// deformation push-forward.

#include <Eigen/Sparse>
#include <functional>

#include "ucfem/fespace.hpp"

namespace ucfem {

using SpMat = Eigen::SparseMatrix<double>;

struct PhysParams {
  double mu1 = 1, mu2 = 1;
  double rho1 = 0, rho2 = 0;
  double mu(Side s) const { return s == Side::neg ? mu1 : mu2; }
  double rho(Side s) const { return s == Side::neg ? rho1 : rho2; }
};

enum class KappaMode { harmonic, average };

struct Kappa {
  double k1 = 0.5, k2 = 0.5;
};

/// Interface averaging weights; `harmonic` weights by the opposite diffusivity.
Kappa kappa_weights(KappaMode mode, double mu1, double mu2);

struct StabParams {
  double gamma_gls = 1.0;
  double gamma_cip = 1.0;
  double gamma_if = 1.0;
  double alpha1 = 1e-3;
  double alpha2 = 1e-2;
  bool include_nc = true;
  KappaMode kappa = KappaMode::harmonic;
};

struct Discretization {
  const Mesh* mesh = nullptr;
  const CutGeometry* geo = nullptr;
  const Deformation* def = nullptr;
  const DofNumbering* num = nullptr;  // degree-p background numbering
  CutSpace space;
  DirichletSpace dual;
  PhysParams phys;
  StabParams stab;
  int p = 1, q = 1;
  int quad_order = 4;         // volume and interface rules
  std::vector<int> omega_elems;
  Side omega_side = Side::neg;
};

/// Wire up spaces and checks. `quad_order` < 0 selects the default 2p+2.
/// Throws when an omega element is cut or carries deformation (mesh too
/// coarse for the data region).
Discretization build_discretization(const Mesh& mesh, const CutGeometry& geo,
                                    const Deformation& def, const DofNumbering& num, int p, int q,
                                    const PhysParams& phys, const StabParams& stab,
                                    std::vector<int> omega_elems, Side omega_side,
                                    int quad_order = -1);

struct PrimalStab {
  SpMat gls, cip, iface, tikh;
};

struct Forms {
  SpMat A;        // dual x cut
  PrimalStab s;
  SpMat s_total;  // cut x cut
  SpMat dual;     // dual x dual
  SpMat m_omega;  // cut x cut
};

Forms assemble_forms(const Discretization& disc);

/// Analytic problem data: per-side solution branches, gradients, and sources,
/// each given by a closed-form global extension.
struct ProblemData {
  std::array<std::function<double(const Vec2&)>, 2> u;
  std::array<std::function<Vec2(const Vec2&)>, 2> grad_u;
  std::array<std::function<double(const Vec2&)>, 2> f;
};

/// Multiplicative-free additive data noise: finite element perturbation
/// fields with prescribed joint norm delta = delta_tilde * h^(p-theta), half
/// carried by the measurement, half by the source.
struct Noise {
  bool active = false;
  double delta = 0;
  Eigen::VectorXd du;                   // background coefficients, degree p
  std::array<Eigen::VectorXd, 2> df;
};

Noise apply_noise(const Discretization& disc, double delta_tilde, int theta, uint64_t seed);

struct Rhs {
  Eigen::VectorXd bu, bz;
};

Rhs assemble_rhs(const Discretization& disc, const ProblemData& data, const Noise& noise);

struct SaddleSystem {
  SpMat K;
  Eigen::VectorXd b;
  int nu = 0, nz = 0;
};

SaddleSystem build_saddle_system(const Forms& forms, const Rhs& rhs);

struct Diagnostics {
  double stab_sq = 0, omega_sq = 0, dual_sq = 0;
  double tnorm() const { return std::sqrt(stab_sq + omega_sq + dual_sq); }
};

Diagnostics eval_diagnostics(const Forms& forms, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& z);

/// Unweighted L2 norm of the dual gradient over the whole (deformed) domain.
double dual_grad_norm(const Discretization& disc, const Eigen::VectorXd& z);

/// Primal stabilization evaluated at a coefficient vector with the
/// least-squares part measured against the source data:
/// sum_i sum_T h^2 ||f_i - L u||^2 + the remaining stabilization terms.
double stab_consistency(const Discretization& disc, const Forms& forms, const ProblemData& data,
                        const Eigen::VectorXd& u);

}  // namespace ucfem
