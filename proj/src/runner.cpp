#include "ucfem/runner.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "ucfem/vtk.hpp"

namespace ucfem {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void rebuild_disc(const ProblemSpec& prob, LevelContext& ctx) {
  std::vector<int> omega_elems;
  for (int e = 0; e < ctx.mesh->num_elements(); ++e)
    if (prob.omega.contains(ctx.mesh->centroid(e))) omega_elems.push_back(e);
  ctx.disc = build_discretization(*ctx.mesh, *ctx.geo, *ctx.def, *ctx.num, prob.p, prob.q,
                                  prob.phys, prob.stab, std::move(omega_elems), prob.omega_side,
                                  prob.quad_order);
}

void apply_sweep_value(ProblemSpec& prob, const std::string& axis, const std::string& value) {
  if (axis == "gammaIF") {
    prob.stab.gamma_if = std::stod(value);
  } else if (axis == "alpha2") {
    prob.stab.alpha2 = std::stod(value);
  } else if (axis == "kappaMode") {
    if (value == "harmonic") {
      prob.stab.kappa = KappaMode::harmonic;
    } else if (value == "average") {
      prob.stab.kappa = KappaMode::average;
    } else {
      throw std::invalid_argument("run_sweep: kappaMode value must be harmonic or average");
    }
  } else if (axis == "includeNc") {
    if (value == "1" || value == "true") {
      prob.stab.include_nc = true;
    } else if (value == "0" || value == "false") {
      prob.stab.include_nc = false;
    } else {
      throw std::invalid_argument("run_sweep: includeNc value must be a boolean");
    }
  } else if (axis == "wavenumber") {
    prob.k2 = std::stod(value);
  } else if (axis == "contrast") {
    prob.phys.mu1 = std::stod(value) * prob.phys.mu2;  // value is the ratio mu1/mu2
  } else {
    throw std::invalid_argument("run_sweep: unknown sweep axis '" + axis + "'");
  }
  finalize_problem(prob);
}

}  // namespace

void build_level(const ProblemSpec& prob, int level, LevelContext& ctx) {
  require(level >= 0 && level < 12, "build_level: refinement level out of range");
  const int n = prob.base_n << level;
  std::vector<Rect> align = prob.omega.align_rects();
  ctx.mesh = std::make_unique<Mesh>(build_structured_mesh(prob.domain, n, align));
  ctx.ls = make_norm_levelset(prob.ell);
  ctx.geo = std::make_unique<CutGeometry>(classify_elements(*ctx.mesh, ctx.ls));
  ctx.def = std::make_unique<Deformation>(build_deformation(*ctx.mesh, *ctx.geo, ctx.ls, prob.q));
  ctx.num = std::make_unique<DofNumbering>(number_lagrange_dofs(*ctx.mesh, prob.p));
  rebuild_disc(prob, ctx);
}

void solve_level(const ProblemSpec& prob, int level, LevelContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  ctx.forms = assemble_forms(ctx.disc);
  const Noise noise =
      apply_noise(ctx.disc, prob.delta_tilde, prob.theta, prob.seed + static_cast<uint64_t>(level));
  const Rhs rhs = assemble_rhs(ctx.disc, prob.data, noise);
  const SaddleSystem sys = build_saddle_system(ctx.forms, rhs);
  const Eigen::VectorXd x = solve_sparse(sys.K, sys.b, &ctx.srep);
  ctx.u = x.head(sys.nu);
  ctx.z = x.tail(sys.nz);
  ctx.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void compute_target_errors(const ProblemSpec& prob, LevelContext& ctx, double& rel_l2,
                           double& rel_h1) {
  const Discretization& disc = ctx.disc;
  const int nloc = disc.num->nloc;
  ShapeValues sv;
  const LagrangeBasis& basis = LagrangeBasis::get(disc.p);
  double num_l2 = 0, den_l2 = 0, num_h1 = 0, den_h1 = 0;
  std::vector<int> cols(static_cast<size_t>(nloc));

  for (const Side side : {Side::neg, Side::pos}) {
    const auto& u_ex = prob.data.u[static_cast<size_t>(side_index(side))];
    const auto& gu_ex = prob.data.grad_u[static_cast<size_t>(side_index(side))];
    for (int e : ctx.geo->active_elems[static_cast<size_t>(side_index(side))]) {
      for (int k = 0; k < nloc; ++k)
        cols[static_cast<size_t>(k)] = disc.space.global(side, disc.num->dof(e, k));
      const Mat2 Ainv = ctx.mesh->affine_jacobian(e).inverse();
      for (const VolPoint& pt : side_volume_rule(*ctx.mesh, *ctx.geo, e, side, disc.quad_order)) {
        const PushForward pf = push_forward(*ctx.def, e, pt.local);
        if (!prob.target.contains(pf.y)) continue;
        basis.eval(pt.local, sv, false);
        double uh = 0;
        Vec2 gh = Vec2::Zero();
        for (int k = 0; k < nloc; ++k) {
          const double c = ctx.u(cols[static_cast<size_t>(k)]);
          uh += c * sv.N(k);
          gh += c * (sv.dN.row(k) * Ainv).transpose();
        }
        if (pf.curved) gh = pf.JinvT * gh;
        const double w = pt.weight * pf.detJ;
        const double ue = u_ex(pf.y);
        const Vec2 ge = gu_ex(pf.y);
        num_l2 += w * (uh - ue) * (uh - ue);
        den_l2 += w * ue * ue;
        num_h1 += w * (gh - ge).squaredNorm();
        den_h1 += w * ge.squaredNorm();
      }
    }
  }
  require(den_l2 > 0 && den_h1 > 0, "compute_target_errors: empty target region");
  rel_l2 = std::sqrt(num_l2 / den_l2);
  rel_h1 = std::sqrt(num_h1 / den_h1);
}

LevelRow compute_row(const ProblemSpec& prob, int level, LevelContext& ctx) {
  LevelRow row;
  row.level = level;
  row.h = ctx.mesh->h;
  row.ndof = ctx.disc.space.dim + ctx.disc.dual.dim;
  compute_target_errors(prob, ctx, row.rel_l2_B, row.rel_h1_B);

  const Eigen::VectorXd iu =
      nodal_interpolate(ctx.disc.space, *ctx.mesh, *ctx.def,
                        prob.data.u[static_cast<size_t>(side_index(Side::neg))],
                        prob.data.u[static_cast<size_t>(side_index(Side::pos))]);
  const Eigen::VectorXd du = ctx.u - iu;
  row.tnorm_err = eval_diagnostics(ctx.forms, du, ctx.z).tnorm();
  row.dual_grad = dual_grad_norm(ctx.disc, ctx.z);
  row.geom_probe =
      geometry_probe(*ctx.mesh, *ctx.geo, *ctx.def, ctx.ls, std::max(2 * prob.q + 2, 4));
  row.runtime_s = ctx.runtime_s;
  return row;
}

std::vector<double> eoc(const std::vector<double>& errors) {
  std::vector<double> out;
  for (size_t k = 0; k + 1 < errors.size(); ++k)
    out.push_back(std::log2(errors[k] / errors[k + 1]));
  return out;
}

namespace {

std::vector<double> eoc_vs_h(const std::vector<LevelRow>& rows, double LevelRow::*field) {
  std::vector<double> out;
  for (size_t k = 0; k + 1 < rows.size(); ++k)
    out.push_back(std::log(rows[k].*field / rows[k + 1].*field) /
                  std::log(rows[k].h / rows[k + 1].h));
  return out;
}

}  // namespace

void write_convergence_csv(const std::string& path, const std::vector<LevelRow>& rows,
                           bool runtime0) {
  std::ofstream out(path);
  require(out.good(), "write_convergence_csv: cannot open '" + path + "'");
  out << "level,h,ndof,rel_l2_B,rel_h1semi_B,tnorm_err,dual_grad,geom_probe,runtime_s\n";
  for (const LevelRow& r : rows)
    out << r.level << "," << fmt(r.h) << "," << r.ndof << "," << fmt(r.rel_l2_B) << ","
        << fmt(r.rel_h1_B) << "," << fmt(r.tnorm_err) << "," << fmt(r.dual_grad) << ","
        << fmt(r.geom_probe) << "," << fmt(runtime0 ? 0.0 : r.runtime_s) << "\n";
  require(out.good(), "write_convergence_csv: write failed");
}

void write_sweep_csv(const std::string& path, const SweepReport& report) {
  std::ofstream out(path);
  require(out.good(), "write_sweep_csv: cannot open '" + path + "'");
  out << "axis_value,rel_l2_B,rel_h1semi_B\n";
  for (const SweepRow& r : report.rows)
    out << r.value << "," << fmt(r.rel_l2_B) << "," << fmt(r.rel_h1_B) << "\n";
  require(out.good(), "write_sweep_csv: write failed");
}

namespace {

void export_vtk_level(const RunConfig& cfg, int level, const LevelContext& ctx) {
  const Mesh& mesh = *ctx.mesh;
  std::vector<double> uvals(static_cast<size_t>(mesh.num_vertices()), 0.0);
  std::vector<double> zvals(static_cast<size_t>(mesh.num_vertices()), 0.0);
  std::vector<double> phivals(static_cast<size_t>(mesh.num_vertices()), 0.0);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const double phi = ctx.geo->phi_vert[static_cast<size_t>(v)];
    phivals[static_cast<size_t>(v)] = phi;
    const Side pref = phi <= 0 ? Side::neg : Side::pos;
    int dof = ctx.disc.space.global(pref, v);
    if (dof < 0) dof = ctx.disc.space.global(other_side(pref), v);
    if (dof >= 0) uvals[static_cast<size_t>(v)] = ctx.u(dof);
    const int zdof = ctx.disc.dual.bg_to_idx[static_cast<size_t>(v)];
    if (zdof >= 0) zvals[static_cast<size_t>(v)] = ctx.z(zdof);
  }
  write_vtk(cfg.vtk_prefix + "_L" + std::to_string(level) + ".vtk", mesh,
            {{"u", uvals}, {"z", zvals}, {"phi", phivals}});
}

}  // namespace

ConvergenceReport run_convergence(const RunConfig& cfg) {
  require(cfg.study == "convergence", "run_convergence: config is not a convergence study");
  require(!cfg.levels.empty(), "run_convergence: no levels given");
  ConvergenceReport report;
  for (int level : cfg.levels) {
    LevelContext ctx;
    build_level(cfg.prob, level, ctx);
    solve_level(cfg.prob, level, ctx);
    report.rows.push_back(compute_row(cfg.prob, level, ctx));
    if (cfg.vtk) export_vtk_level(cfg, level, ctx);
  }
  report.eoc_l2 = eoc_vs_h(report.rows, &LevelRow::rel_l2_B);
  report.eoc_h1 = eoc_vs_h(report.rows, &LevelRow::rel_h1_B);
  report.eoc_tnorm = eoc_vs_h(report.rows, &LevelRow::tnorm_err);
  report.eoc_dual = eoc_vs_h(report.rows, &LevelRow::dual_grad);
  if (!cfg.out_csv.empty()) write_convergence_csv(cfg.out_csv, report.rows, cfg.runtime0);
  return report;
}

SweepReport run_sweep(const RunConfig& cfg) {
  require(cfg.study == "sweep", "run_sweep: config is not a sweep study");
  require(!cfg.levels.empty(), "run_sweep: no levels given");
  require(!cfg.sweep_values.empty(), "run_sweep: no sweep values given");
  const int level = cfg.levels.size() >= 2 ? cfg.levels[cfg.levels.size() - 2] : cfg.levels.back();

  SweepReport report;
  report.axis = cfg.sweep_axis;
  LevelContext ctx;
  build_level(cfg.prob, level, ctx);
  for (const std::string& value : cfg.sweep_values) {
    ProblemSpec prob = cfg.prob;
    apply_sweep_value(prob, cfg.sweep_axis, value);
    rebuild_disc(prob, ctx);
    solve_level(prob, level, ctx);
    SweepRow row;
    row.value = value;
    compute_target_errors(prob, ctx, row.rel_l2_B, row.rel_h1_B);
    report.rows.push_back(row);
  }
  if (!cfg.out_csv.empty()) write_sweep_csv(cfg.out_csv, report);
  return report;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "load_config: cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  require(j.is_object(), "load_config: top level must be an object");

  static const std::vector<std::string> known = {
      "problem", "levels",      "study",     "sweep_axis", "sweep_values", "out",
      "vtk",     "vtk_prefix",  "runtime0",  "p",          "q",            "base_n",
      "quad_order", "seed",     "delta_tilde", "theta",    "mu1",          "mu2",
      "k1",      "k2",          "gamma_gls", "gamma_cip",  "gamma_if",     "alpha1",
      "alpha2",  "include_nc",  "kappa"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const auto& k : known) ok = ok || k == key;
    require(ok, "load_config: unknown key '" + key + "'");
  }

  RunConfig cfg;
  cfg.prob = make_problem(j.value("problem", std::string("diffusion-l4")));
  if (j.contains("levels")) cfg.levels = j.at("levels").get<std::vector<int>>();
  cfg.study = j.value("study", cfg.study);
  cfg.sweep_axis = j.value("sweep_axis", cfg.sweep_axis);
  if (j.contains("sweep_values"))
    for (const auto& v : j.at("sweep_values"))
      cfg.sweep_values.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  cfg.out_csv = j.value("out", cfg.out_csv);
  cfg.vtk = j.value("vtk", cfg.vtk);
  cfg.vtk_prefix = j.value("vtk_prefix", cfg.vtk_prefix);
  cfg.runtime0 = j.value("runtime0", cfg.runtime0);

  ProblemSpec& p = cfg.prob;
  p.p = j.value("p", p.p);
  p.q = j.value("q", p.q);
  p.base_n = j.value("base_n", p.base_n);
  p.quad_order = j.value("quad_order", p.quad_order);
  p.seed = j.value("seed", p.seed);
  p.delta_tilde = j.value("delta_tilde", p.delta_tilde);
  p.theta = j.value("theta", p.theta);
  p.phys.mu1 = j.value("mu1", p.phys.mu1);
  p.phys.mu2 = j.value("mu2", p.phys.mu2);
  p.k1 = j.value("k1", p.k1);
  p.k2 = j.value("k2", p.k2);
  p.stab.gamma_gls = j.value("gamma_gls", p.stab.gamma_gls);
  p.stab.gamma_cip = j.value("gamma_cip", p.stab.gamma_cip);
  p.stab.gamma_if = j.value("gamma_if", p.stab.gamma_if);
  p.stab.alpha1 = j.value("alpha1", p.stab.alpha1);
  p.stab.alpha2 = j.value("alpha2", p.stab.alpha2);
  if (j.contains("include_nc")) p.stab.include_nc = j.at("include_nc").get<bool>();
  if (j.contains("kappa")) {
    const std::string mode = j.at("kappa").get<std::string>();
    require(mode == "harmonic" || mode == "average", "load_config: kappa must be harmonic or average");
    p.stab.kappa = mode == "harmonic" ? KappaMode::harmonic : KappaMode::average;
  }
  finalize_problem(p);
  return cfg;
}

}  // namespace ucfem
