#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "ucfem/runner.hpp"

namespace {

void print_convergence(const ucfem::ConvergenceReport& rep) {
  std::printf("%5s %12s %9s %12s %12s %12s %12s %12s %10s\n", "level", "h", "ndof", "rel_l2_B",
              "rel_h1semi", "tnorm_err", "dual_grad", "geom_probe", "runtime_s");
  for (const ucfem::LevelRow& r : rep.rows)
    std::printf("%5d %12.5e %9ld %12.5e %12.5e %12.5e %12.5e %12.5e %10.3f\n", r.level, r.h,
                r.ndof, r.rel_l2_B, r.rel_h1_B, r.tnorm_err, r.dual_grad, r.geom_probe,
                r.runtime_s);
  auto print_eoc = [](const char* name, const std::vector<double>& v) {
    std::printf("EOC %-10s", name);
    for (double e : v) std::printf(" %7.3f", e);
    std::printf("\n");
  };
  if (rep.rows.size() > 1) {
    print_eoc("l2_B", rep.eoc_l2);
    print_eoc("h1_B", rep.eoc_h1);
    print_eoc("tnorm", rep.eoc_tnorm);
    print_eoc("dual", rep.eoc_dual);
  }
}

void print_sweep(const ucfem::SweepReport& rep) {
  std::printf("%16s %12s %12s\n", rep.axis.c_str(), "rel_l2_B", "rel_h1semi");
  for (const ucfem::SweepRow& r : rep.rows)
    std::printf("%16s %12.5e %12.5e\n", r.value.c_str(), r.rel_l2_B, r.rel_h1_B);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unfitted isoparametric solver for unique continuation across an interface"};

  std::string config, problem, sweep, out, kappa, study, vtk_prefix;
  std::vector<int> levels;
  int p = 2, q = 2, base_n = 0, quad_order = -1, theta = 0;
  uint64_t seed = 0;
  double mu1 = 0, mu2 = 0, k1 = 0, k2 = 0;
  double gamma_gls = 1, gamma_cip = 1, gamma_if = 1, alpha1 = 1e-3, alpha2 = 1e-2;
  double delta_tilde = 0;
  bool runtime0 = false, vtk = false, no_nc = false;

  app.add_option("--config", config, "JSON config file (flags override its keys)");
  app.add_option("--problem", problem, "problem id: diffusion-l4, helmholtz-l4-box, helmholtz-l4-convex");
  app.add_option("--levels", levels, "refinement levels, e.g. 0,1,2,3")->delimiter(',');
  app.add_option("--p", p, "finite element degree (1..3)");
  app.add_option("--q", q, "geometry order (1..p)");
  app.add_option("--sweep", sweep, "sweep study axis:v1,v2,... (axis: gammaIF, alpha2, kappaMode, includeNc, wavenumber, contrast)");
  app.add_option("--seed", seed, "base RNG seed for data perturbations");
  app.add_option("--out", out, "output CSV path");
  app.add_option("--base-n", base_n, "cells per direction on level 0");
  app.add_option("--quad-order", quad_order, "quadrature order (-1: 2p+2)");
  app.add_option("--delta-tilde", delta_tilde, "noise amplitude factor");
  app.add_option("--theta", theta, "noise strength exponent in delta = delta_tilde * h^(p-theta)");
  app.add_option("--mu1", mu1, "diffusivity inside the interface");
  app.add_option("--mu2", mu2, "diffusivity outside the interface");
  app.add_option("--k1", k1, "wave number inside (helmholtz)");
  app.add_option("--k2", k2, "wave number outside (helmholtz)");
  app.add_option("--gamma-gls", gamma_gls, "element residual stabilization weight");
  app.add_option("--gamma-cip", gamma_cip, "gradient jump stabilization weight");
  app.add_option("--gamma-if", gamma_if, "interface stabilization weight");
  app.add_option("--alpha1", alpha1, "Tikhonov L2 weight");
  app.add_option("--alpha2", alpha2, "Tikhonov gradient weight");
  app.add_option("--kappa", kappa, "flux weighting: harmonic or average");
  app.add_flag("--no-nc", no_nc, "drop the interface flux coupling term");
  app.add_flag("--runtime0", runtime0, "write runtime_s as 0 for byte-stable CSV output");
  app.add_flag("--vtk", vtk, "export VTK solution files per level");
  app.add_option("--vtk-prefix", vtk_prefix, "VTK output path prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    ucfem::RunConfig cfg;
    if (!config.empty()) cfg = ucfem::load_config(config);
    if (config.empty() || !problem.empty())
      cfg.prob = ucfem::make_problem(problem.empty() ? "diffusion-l4" : problem);

    ucfem::ProblemSpec& pr = cfg.prob;
    if (app.count("--levels")) cfg.levels = levels;
    if (app.count("--p")) pr.p = p;
    if (app.count("--q")) pr.q = q;
    if (app.count("--seed")) pr.seed = seed;
    if (app.count("--out")) cfg.out_csv = out;
    if (app.count("--base-n")) pr.base_n = base_n;
    if (app.count("--quad-order")) pr.quad_order = quad_order;
    if (app.count("--delta-tilde")) pr.delta_tilde = delta_tilde;
    if (app.count("--theta")) pr.theta = theta;
    if (app.count("--mu1")) pr.phys.mu1 = mu1;
    if (app.count("--mu2")) pr.phys.mu2 = mu2;
    if (app.count("--k1")) pr.k1 = k1;
    if (app.count("--k2")) pr.k2 = k2;
    if (app.count("--gamma-gls")) pr.stab.gamma_gls = gamma_gls;
    if (app.count("--gamma-cip")) pr.stab.gamma_cip = gamma_cip;
    if (app.count("--gamma-if")) pr.stab.gamma_if = gamma_if;
    if (app.count("--alpha1")) pr.stab.alpha1 = alpha1;
    if (app.count("--alpha2")) pr.stab.alpha2 = alpha2;
    if (app.count("--kappa")) {
      if (kappa != "harmonic" && kappa != "average")
        throw std::invalid_argument("--kappa must be harmonic or average");
      pr.stab.kappa = kappa == "harmonic" ? ucfem::KappaMode::harmonic : ucfem::KappaMode::average;
    }
    if (no_nc) pr.stab.include_nc = false;
    if (runtime0) cfg.runtime0 = true;
    if (vtk) cfg.vtk = true;
    if (app.count("--vtk-prefix")) cfg.vtk_prefix = vtk_prefix;

    if (!sweep.empty()) {
      const size_t colon = sweep.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 >= sweep.size())
        throw std::invalid_argument("--sweep expects axis:v1,v2,...");
      cfg.study = "sweep";
      cfg.sweep_axis = sweep.substr(0, colon);
      cfg.sweep_values.clear();
      std::string rest = sweep.substr(colon + 1);
      size_t pos = 0;
      while (pos <= rest.size()) {
        const size_t comma = rest.find(',', pos);
        const std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) cfg.sweep_values.push_back(tok);
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }

    ucfem::finalize_problem(pr);
    if (cfg.study == "sweep") {
      print_sweep(ucfem::run_sweep(cfg));
    } else {
      print_convergence(ucfem::run_convergence(cfg));
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
