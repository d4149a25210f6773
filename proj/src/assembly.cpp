#include "ucfem/assembly.hpp"

#include <cmath>

namespace ucfem {

Kappa kappa_weights(KappaMode mode, double mu1, double mu2) {
  require(mu1 > 0 && mu2 > 0, "kappa_weights: diffusivities must be positive");
  if (mode == KappaMode::average) return {0.5, 0.5};
  return {mu2 / (mu1 + mu2), mu1 / (mu1 + mu2)};
}

Discretization build_discretization(const Mesh& mesh, const CutGeometry& geo,
                                    const Deformation& def, const DofNumbering& num, int p, int q,
                                    const PhysParams& phys, const StabParams& stab,
                                    std::vector<int> omega_elems, Side omega_side, int quad_order) {
  require(p >= 1 && p <= 3, "build_discretization: p must be in 1..3");
  require(q >= 1 && q <= p, "build_discretization: need 1 <= q <= p");
  require(num.degree == p, "build_discretization: numbering degree mismatch");
  require(def.q == q, "build_discretization: deformation order mismatch");
  require(phys.mu1 > 0 && phys.mu2 > 0, "build_discretization: diffusivities must be positive");
  require(stab.alpha1 > 0, "build_discretization: alpha1 must be positive");
  require(!omega_elems.empty(), "build_discretization: empty data region");

  Discretization disc;
  disc.mesh = &mesh;
  disc.geo = &geo;
  disc.def = &def;
  disc.num = &num;
  disc.space = build_cut_space(geo, num);
  disc.dual = build_dirichlet_space(num);
  disc.phys = phys;
  disc.stab = stab;
  disc.p = p;
  disc.q = q;
  disc.quad_order = quad_order < 0 ? 2 * p + 2 : quad_order;
  disc.omega_elems = std::move(omega_elems);
  disc.omega_side = omega_side;

  for (int e : disc.omega_elems) {
    const bool bad_cut = geo.elem_class[static_cast<size_t>(e)] == ElemClass::cut;
    const bool deformed = !def.is_identity_on(e);
    if (bad_cut || deformed)
      throw std::runtime_error("build_discretization: mesh too coarse for the data region "
                               "(cut or deformed element inside omega)");
    require(geo.is_active(e, omega_side),
            "build_discretization: omega element not on the measurement side");
  }
  return disc;
}

namespace {

using Triplet = Eigen::Triplet<double>;

std::vector<VolPoint> full_rule(const Mesh& mesh, int e, int order) {
  const TriangleRule& rule = triangle_rule(order);
  const double scale = 2.0 * mesh.area(e);
  std::vector<VolPoint> out;
  out.reserve(rule.points.size());
  for (size_t i = 0; i < rule.points.size(); ++i) {
    VolPoint p;
    p.local = rule.points[i];
    p.phys = mesh.to_physical(e, p.local);
    p.weight = rule.weights[i] * scale;
    out.push_back(p);
  }
  return out;
}

struct BasisEval {
  Eigen::VectorXd N;
  Eigen::Matrix<double, Eigen::Dynamic, 2> grad;  // deformed-physical gradients
  Eigen::VectorXd lap;                            // deformed-physical Laplacians
};

void eval_basis(const Discretization& d, int e, const Vec2& xi, const PushForward& pf,
                bool need_lap, BasisEval& out) {
  ShapeValues sv;
  LagrangeBasis::get(d.p).eval(xi, sv, need_lap);
  const Mat2 Ainv = d.mesh->affine_jacobian(e).inverse();
  out.N = sv.N;
  Eigen::Matrix<double, Eigen::Dynamic, 2> dphys = sv.dN * Ainv;
  out.grad = pf.curved ? (dphys * pf.JinvT.transpose()).eval() : std::move(dphys);
  if (!need_lap) return;
  const int n = static_cast<int>(out.N.size());
  out.lap.resize(n);
  const Mat2 Jinv = pf.JinvT.transpose();
  for (int k = 0; k < n; ++k) {
    const Mat2 Hx = Ainv.transpose() * sv.d2N[static_cast<size_t>(k)] * Ainv;
    if (pf.curved) {
      // Second derivatives on the curved configuration pick up the curvature
      // of the map through the chain rule.
      const Vec2 gy = out.grad.row(k).transpose();
      const Mat2 Hy = pf.JinvT * (Hx - gy(0) * pf.H[0] - gy(1) * pf.H[1]) * Jinv;
      out.lap(k) = Hy.trace();
    } else {
      out.lap(k) = Hx.trace();
    }
  }
}

void gather_cut(const Discretization& d, int e, Side s, std::vector<int>& dofs) {
  dofs.resize(static_cast<size_t>(d.num->nloc));
  for (int k = 0; k < d.num->nloc; ++k) dofs[static_cast<size_t>(k)] = d.space.global(s, d.num->dof(e, k));
}

void gather_dual(const Discretization& d, int e, std::vector<int>& dofs) {
  dofs.resize(static_cast<size_t>(d.num->nloc));
  for (int k = 0; k < d.num->nloc; ++k) dofs[static_cast<size_t>(k)] = d.dual.bg_to_idx[static_cast<size_t>(d.num->dof(e, k))];
}

void insert_local(std::vector<Triplet>& trips, const std::vector<int>& rows,
                  const std::vector<int>& cols, const Eigen::MatrixXd& M) {
  for (size_t j = 0; j < rows.size(); ++j) {
    if (rows[j] < 0) continue;
    for (size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] < 0) continue;
      trips.emplace_back(rows[j], cols[k], M(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)));
    }
  }
}

/// Mapped interface measure and unit normal at one interface point.
void mapped_interface(const PushForward& pf, const Vec2& n_lin, double& factor, Vec2& n_def) {
  if (!pf.curved) {
    factor = 1.0;
    n_def = n_lin;
    return;
  }
  const Vec2 v = pf.JinvT * n_lin;
  const double nn = v.norm();
  factor = pf.detJ * nn;
  n_def = v / nn;
}

}  // namespace

Forms assemble_forms(const Discretization& disc) {
  const Mesh& mesh = *disc.mesh;
  const CutGeometry& geo = *disc.geo;
  const Deformation& def = *disc.def;
  const int nloc = disc.num->nloc;
  const double h = mesh.h;
  const Kappa kap = kappa_weights(disc.stab.kappa, disc.phys.mu1, disc.phys.mu2);
  const double mu_bar = 0.5 * (disc.phys.mu1 + disc.phys.mu2);
  const double h2q = std::pow(h, 2 * disc.q);

  std::vector<Triplet> tA, tGls, tCip, tIf, tTikh, tDual, tMass;
  std::vector<int> cols, cols2, rows;
  BasisEval bas, bas2;
  Eigen::MatrixXd M, Mn, Mp;

  for (const Side side : {Side::neg, Side::pos}) {
    const double mu = disc.phys.mu(side);
    const double rho = disc.phys.rho(side);
    for (int e : geo.active_elems[static_cast<size_t>(side_index(side))]) {
      gather_cut(disc, e, side, cols);
      gather_dual(disc, e, rows);

      // Volume terms on the part of the element lying on this side.
      const auto pts = side_volume_rule(mesh, geo, e, side, disc.quad_order);
      M.setZero(nloc, nloc);          // a_h block: dual rows x cut cols
      Eigen::MatrixXd Mg = Eigen::MatrixXd::Zero(nloc, nloc);  // GLS
      Eigen::MatrixXd Md = Eigen::MatrixXd::Zero(nloc, nloc);  // dual stabilization
      for (const VolPoint& pt : pts) {
        const PushForward pf = push_forward(def, e, pt.local, true);
        eval_basis(disc, e, pt.local, pf, true, bas);
        const double w = pt.weight * pf.detJ;
        for (int j = 0; j < nloc; ++j) {
          const double Lj = -mu * bas.lap(j) - rho * bas.N(j);
          for (int k = 0; k < nloc; ++k) {
            const double stiff = bas.grad.row(j).dot(bas.grad.row(k));
            M(j, k) += w * (mu * stiff - rho * bas.N(j) * bas.N(k));
            Md(j, k) += w * mu * stiff;
            const double Lk = -mu * bas.lap(k) - rho * bas.N(k);
            Mg(j, k) += disc.stab.gamma_gls * h * h * w * Lj * Lk;
          }
        }
      }
      insert_local(tA, rows, cols, M);
      insert_local(tGls, cols, cols, Mg);
      insert_local(tDual, rows, rows, Md);

      // Tikhonov term over the full (deformed) element of the active mesh.
      M.setZero(nloc, nloc);
      for (const VolPoint& pt : full_rule(mesh, e, disc.quad_order)) {
        const PushForward pf = push_forward(def, e, pt.local);
        eval_basis(disc, e, pt.local, pf, false, bas);
        const double w = pt.weight * pf.detJ;
        for (int j = 0; j < nloc; ++j)
          for (int k = 0; k < nloc; ++k)
            M(j, k) += h2q * w *
                       (disc.stab.alpha1 * bas.N(j) * bas.N(k) +
                        disc.stab.alpha2 * bas.grad.row(j).dot(bas.grad.row(k)));
      }
      insert_local(tTikh, cols, cols, M);
    }
  }

  // Interface terms on cut elements: Nitsche coupling in A and the jump
  // stabilizers. Both side copies live on the same element basis.
  const double avg_coef = kap.k1 * disc.phys.mu1 + kap.k2 * disc.phys.mu2;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    if (geo.elem_class[static_cast<size_t>(e)] != ElemClass::cut) continue;
    gather_cut(disc, e, Side::neg, cols);
    gather_cut(disc, e, Side::pos, cols2);
    gather_dual(disc, e, rows);
    std::vector<int> both = cols;
    both.insert(both.end(), cols2.begin(), cols2.end());

    Mn.setZero(nloc, nloc);  // Nitsche rows x negative cols
    Mp.setZero(nloc, nloc);  // Nitsche rows x positive cols
    M.setZero(2 * nloc, 2 * nloc);
    for (const LinePoint& pt : interface_rule(mesh, geo, e, disc.quad_order)) {
      const PushForward pf = push_forward(def, e, pt.local);
      eval_basis(disc, e, pt.local, pf, false, bas);
      double factor;
      Vec2 n;
      mapped_interface(pf, pt.normal, factor, n);
      const double w = pt.weight * factor;

      if (disc.stab.include_nc) {
        for (int j = 0; j < nloc; ++j) {
          const double flux_j = -avg_coef * bas.grad.row(j).dot(n);
          for (int k = 0; k < nloc; ++k) {
            Mn(j, k) += w * flux_j * bas.N(k);
            Mp(j, k) -= w * flux_j * bas.N(k);
          }
        }
      }

      const Mat2 P = Mat2::Identity() - n * n.transpose();
      for (int j = 0; j < 2 * nloc; ++j) {
        const int lj = j % nloc;
        const double sj = j < nloc ? 1.0 : -1.0;
        const double mu_j = j < nloc ? disc.phys.mu1 : disc.phys.mu2;
        const double val_j = sj * bas.N(lj);
        const double flux_j = sj * mu_j * bas.grad.row(lj).dot(n);
        const Vec2 tang_j = sj * (P * bas.grad.row(lj).transpose());
        for (int k = 0; k < 2 * nloc; ++k) {
          const int lk = k % nloc;
          const double sk = k < nloc ? 1.0 : -1.0;
          const double mu_k = k < nloc ? disc.phys.mu1 : disc.phys.mu2;
          const double val_k = sk * bas.N(lk);
          const double flux_k = sk * mu_k * bas.grad.row(lk).dot(n);
          const Vec2 tang_k = sk * (P * bas.grad.row(lk).transpose());
          M(j, k) += disc.stab.gamma_if * w *
                     ((mu_bar / h) * val_j * val_k + h * flux_j * flux_k +
                      h * mu_bar * tang_j.dot(tang_k));
        }
      }
    }
    insert_local(tA, rows, cols, Mn);
    insert_local(tA, rows, cols2, Mp);
    insert_local(tIf, both, both, M);
  }

  // Gradient-jump penalty over full facets interior to each active mesh.
  for (const Mesh::Facet& f : mesh.facets) {
    if (f.right < 0) continue;
    const Vec2 va = mesh.vertex(f.a), vb = mesh.vertex(f.b);
    const Vec2 dvec = vb - va;
    const double len = dvec.norm();
    const Vec2 t_dir = dvec / len;
    const double orient = perp_cw(t_dir).dot(f.normal) > 0 ? 1.0 : -1.0;
    const SegmentRule& rule = segment_rule(disc.quad_order);

    for (const Side side : {Side::neg, Side::pos}) {
      const auto& active = geo.active_flag[static_cast<size_t>(side_index(side))];
      if (!active[static_cast<size_t>(f.left)] || !active[static_cast<size_t>(f.right)]) continue;
      const double mu = disc.phys.mu(side);
      gather_cut(disc, f.left, side, cols);
      gather_cut(disc, f.right, side, cols2);
      std::vector<int> both = cols;
      both.insert(both.end(), cols2.begin(), cols2.end());

      M.setZero(2 * nloc, 2 * nloc);
      for (size_t iq = 0; iq < rule.points.size(); ++iq) {
        const Vec2 x = va + rule.points[iq] * dvec;
        const Vec2 xiL = mesh.to_local(f.left, x);
        const Vec2 xiR = mesh.to_local(f.right, x);
        const PushForward pfL = push_forward(def, f.left, xiL);
        const PushForward pfR = push_forward(def, f.right, xiR);
        eval_basis(disc, f.left, xiL, pfL, false, bas);
        eval_basis(disc, f.right, xiR, pfR, false, bas2);

        // The deformed facet is the same curve from both sides; its tangent
        // comes from either push-forward, the normal from a quarter turn.
        const Vec2 tmap = pfL.curved || pfR.curved ? Vec2(pfL.J * t_dir) : t_dir;
        const double wline = rule.weights[iq] * len * tmap.norm();
        const Vec2 n = orient * perp_cw(tmap).normalized();

        Eigen::VectorXd jn(2 * nloc);
        for (int k = 0; k < nloc; ++k) {
          jn(k) = bas.grad.row(k).dot(n);
          jn(nloc + k) = -bas2.grad.row(k).dot(n);
        }
        const double scale = disc.stab.gamma_cip * h * mu * wline;
        for (int j = 0; j < 2 * nloc; ++j)
          for (int k = 0; k < 2 * nloc; ++k) M(j, k) += scale * jn(j) * jn(k);
      }
      insert_local(tCip, both, both, M);
    }
  }

  // Data-fidelity mass matrix on the (uncut, undeformed) omega elements.
  for (int e : disc.omega_elems) {
    gather_cut(disc, e, disc.omega_side, cols);
    M.setZero(nloc, nloc);
    for (const VolPoint& pt : full_rule(mesh, e, disc.quad_order)) {
      eval_basis(disc, e, pt.local, PushForward{}, false, bas);
      for (int j = 0; j < nloc; ++j)
        for (int k = 0; k < nloc; ++k) M(j, k) += pt.weight * bas.N(j) * bas.N(k);
    }
    insert_local(tMass, cols, cols, M);
  }

  Forms forms;
  const int nu = disc.space.dim;
  const int nz = disc.dual.dim;
  forms.A.resize(nz, nu);
  forms.A.setFromTriplets(tA.begin(), tA.end());
  forms.s.gls.resize(nu, nu);
  forms.s.gls.setFromTriplets(tGls.begin(), tGls.end());
  forms.s.cip.resize(nu, nu);
  forms.s.cip.setFromTriplets(tCip.begin(), tCip.end());
  forms.s.iface.resize(nu, nu);
  forms.s.iface.setFromTriplets(tIf.begin(), tIf.end());
  forms.s.tikh.resize(nu, nu);
  forms.s.tikh.setFromTriplets(tTikh.begin(), tTikh.end());
  forms.s_total = forms.s.gls + forms.s.cip + forms.s.iface + forms.s.tikh;
  forms.dual.resize(nz, nz);
  forms.dual.setFromTriplets(tDual.begin(), tDual.end());
  forms.m_omega.resize(nu, nu);
  forms.m_omega.setFromTriplets(tMass.begin(), tMass.end());
  return forms;
}

namespace {

/// Deterministic, platform-independent draw in [-1,1).
struct UniformDraws {
  uint64_t state;
  explicit UniformDraws(uint64_t seed) : state(seed) {}
  double next() {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
  }
};

double field_value(const Eigen::VectorXd& coef, const Discretization& d, int e,
                   const Eigen::VectorXd& N) {
  double v = 0.0;
  for (int k = 0; k < d.num->nloc; ++k) v += coef(d.num->dof(e, k)) * N(k);
  return v;
}

}  // namespace

Noise apply_noise(const Discretization& disc, double delta_tilde, int theta, uint64_t seed) {
  Noise noise;
  if (delta_tilde == 0.0) return noise;
  require(theta >= 0 && theta <= 2, "apply_noise: theta must be in {0,1,2}");

  const int n = disc.num->ndof;
  noise.active = true;
  noise.delta = delta_tilde * std::pow(disc.mesh->h, disc.p - theta);

  UniformDraws rng(seed);
  noise.du.resize(n);
  for (int d = 0; d < n; ++d) noise.du(d) = rng.next();
  for (int s = 0; s < 2; ++s) {
    noise.df[static_cast<size_t>(s)].resize(n);
    for (int d = 0; d < n; ++d) noise.df[static_cast<size_t>(s)](d) = rng.next();
  }

  BasisEval bas;
  double norm_du_sq = 0.0;
  for (int e : disc.omega_elems)
    for (const VolPoint& pt : full_rule(*disc.mesh, e, disc.quad_order)) {
      eval_basis(disc, e, pt.local, PushForward{}, false, bas);
      const double v = field_value(noise.du, disc, e, bas.N);
      norm_du_sq += pt.weight * v * v;
    }

  double norm_df_sq = 0.0;
  for (const Side side : {Side::neg, Side::pos})
    for (int e : disc.geo->active_elems[static_cast<size_t>(side_index(side))])
      for (const VolPoint& pt : side_volume_rule(*disc.mesh, *disc.geo, e, side, disc.quad_order)) {
        const PushForward pf = push_forward(*disc.def, e, pt.local);
        eval_basis(disc, e, pt.local, pf, false, bas);
        const double v = field_value(noise.df[static_cast<size_t>(side_index(side))], disc, e, bas.N);
        norm_df_sq += pt.weight * pf.detJ * v * v;
      }

  require(norm_du_sq > 0 && norm_df_sq > 0, "apply_noise: degenerate perturbation draw");
  const double half = 0.5 * noise.delta;
  noise.du *= half / std::sqrt(norm_du_sq);
  const double fscale = half / std::sqrt(norm_df_sq);
  noise.df[0] *= fscale;
  noise.df[1] *= fscale;
  return noise;
}

Rhs assemble_rhs(const Discretization& disc, const ProblemData& data, const Noise& noise) {
  const Mesh& mesh = *disc.mesh;
  const CutGeometry& geo = *disc.geo;
  const Deformation& def = *disc.def;
  const int nloc = disc.num->nloc;
  const double h = mesh.h;

  Rhs rhs;
  rhs.bu = Eigen::VectorXd::Zero(disc.space.dim);
  rhs.bz = Eigen::VectorXd::Zero(disc.dual.dim);

  std::vector<int> cols, rows;
  BasisEval bas;

  // Measurement data on omega (undeformed there).
  const auto& u_omega = data.u[static_cast<size_t>(side_index(disc.omega_side))];
  for (int e : disc.omega_elems) {
    gather_cut(disc, e, disc.omega_side, cols);
    for (const VolPoint& pt : full_rule(mesh, e, disc.quad_order)) {
      eval_basis(disc, e, pt.local, PushForward{}, false, bas);
      double val = u_omega(pt.phys);
      if (noise.active) val += field_value(noise.du, disc, e, bas.N);
      for (int k = 0; k < nloc; ++k) rhs.bu(cols[static_cast<size_t>(k)]) += pt.weight * val * bas.N(k);
    }
  }

  // Source data: dual load and the least-squares coupling.
  for (const Side side : {Side::neg, Side::pos}) {
    const double mu = disc.phys.mu(side);
    const double rho = disc.phys.rho(side);
    const auto& f = data.f[static_cast<size_t>(side_index(side))];
    const auto& df = noise.df[static_cast<size_t>(side_index(side))];
    for (int e : geo.active_elems[static_cast<size_t>(side_index(side))]) {
      gather_cut(disc, e, side, cols);
      gather_dual(disc, e, rows);
      for (const VolPoint& pt : side_volume_rule(mesh, geo, e, side, disc.quad_order)) {
        const PushForward pf = push_forward(def, e, pt.local, true);
        eval_basis(disc, e, pt.local, pf, true, bas);
        const double w = pt.weight * pf.detJ;
        double fval = f(pf.y);
        if (noise.active) fval += field_value(df, disc, e, bas.N);
        for (int k = 0; k < nloc; ++k) {
          const double Lk = -mu * bas.lap(k) - rho * bas.N(k);
          rhs.bu(cols[static_cast<size_t>(k)]) += disc.stab.gamma_gls * h * h * w * fval * Lk;
          if (rows[static_cast<size_t>(k)] >= 0) rhs.bz(rows[static_cast<size_t>(k)]) += w * fval * bas.N(k);
        }
      }
    }
  }
  return rhs;
}

SaddleSystem build_saddle_system(const Forms& forms, const Rhs& rhs) {
  SaddleSystem sys;
  sys.nu = static_cast<int>(forms.s_total.rows());
  sys.nz = static_cast<int>(forms.dual.rows());
  const int n = sys.nu + sys.nz;

  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(forms.s_total.nonZeros() + forms.m_omega.nonZeros() +
                                    2 * forms.A.nonZeros() + forms.dual.nonZeros()));
  for (int c = 0; c < forms.s_total.outerSize(); ++c)
    for (SpMat::InnerIterator it(forms.s_total, c); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int c = 0; c < forms.m_omega.outerSize(); ++c)
    for (SpMat::InnerIterator it(forms.m_omega, c); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int c = 0; c < forms.A.outerSize(); ++c)
    for (SpMat::InnerIterator it(forms.A, c); it; ++it) {
      const int r = static_cast<int>(it.row()), cc = static_cast<int>(it.col());
      trips.emplace_back(sys.nu + r, cc, it.value());
      trips.emplace_back(cc, sys.nu + r, it.value());
    }
  for (int c = 0; c < forms.dual.outerSize(); ++c)
    for (SpMat::InnerIterator it(forms.dual, c); it; ++it)
      trips.emplace_back(sys.nu + static_cast<int>(it.row()), sys.nu + static_cast<int>(it.col()),
                         -it.value());

  sys.K.resize(n, n);
  sys.K.setFromTriplets(trips.begin(), trips.end());
  sys.b.resize(n);
  sys.b << rhs.bu, rhs.bz;
  return sys;
}

Diagnostics eval_diagnostics(const Forms& forms, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& z) {
  Diagnostics d;
  d.stab_sq = u.dot(forms.s_total * u);
  d.omega_sq = u.dot(forms.m_omega * u);
  d.dual_sq = z.dot(forms.dual * z);
  return d;
}

double dual_grad_norm(const Discretization& disc, const Eigen::VectorXd& z) {
  BasisEval bas;
  std::vector<int> rows;
  double acc = 0.0;
  for (const Side side : {Side::neg, Side::pos})
    for (int e : disc.geo->active_elems[static_cast<size_t>(side_index(side))]) {
      gather_dual(disc, e, rows);
      for (const VolPoint& pt : side_volume_rule(*disc.mesh, *disc.geo, e, side, disc.quad_order)) {
        const PushForward pf = push_forward(*disc.def, e, pt.local);
        eval_basis(disc, e, pt.local, pf, false, bas);
        Vec2 g = Vec2::Zero();
        for (int k = 0; k < disc.num->nloc; ++k)
          if (rows[static_cast<size_t>(k)] >= 0) g += z(rows[static_cast<size_t>(k)]) * bas.grad.row(k).transpose();
        acc += pt.weight * pf.detJ * g.squaredNorm();
      }
    }
  return std::sqrt(acc);
}

double stab_consistency(const Discretization& disc, const Forms& forms, const ProblemData& data,
                        const Eigen::VectorXd& u) {
  // Quadratic part from the assembled stabilization; the least-squares part is
  // completed to h^2 || f - L u ||^2 with the data vector and constant.
  const double h = disc.mesh->h;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(disc.space.dim);
  double c = 0.0;
  BasisEval bas;
  std::vector<int> cols;
  for (const Side side : {Side::neg, Side::pos}) {
    const double mu = disc.phys.mu(side);
    const double rho = disc.phys.rho(side);
    const auto& f = data.f[static_cast<size_t>(side_index(side))];
    for (int e : disc.geo->active_elems[static_cast<size_t>(side_index(side))]) {
      gather_cut(disc, e, side, cols);
      for (const VolPoint& pt : side_volume_rule(*disc.mesh, *disc.geo, e, side, disc.quad_order)) {
        const PushForward pf = push_forward(*disc.def, e, pt.local, true);
        eval_basis(disc, e, pt.local, pf, true, bas);
        const double w = pt.weight * pf.detJ;
        const double fval = f(pf.y);
        c += disc.stab.gamma_gls * h * h * w * fval * fval;
        for (int k = 0; k < disc.num->nloc; ++k) {
          const double Lk = -mu * bas.lap(k) - rho * bas.N(k);
          g(cols[static_cast<size_t>(k)]) += disc.stab.gamma_gls * h * h * w * fval * Lk;
        }
      }
    }
  }
  return u.dot(forms.s_total * u) - 2.0 * u.dot(g) + c;
}

}  // namespace ucfem
