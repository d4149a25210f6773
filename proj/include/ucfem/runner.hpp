#pragma once

/// Experiment driver: convergence studies over uniformly refined meshes and
/// one-axis parameter sweeps on a fixed mesh, with CSV output.

#include <memory>
#include <string>
#include <vector>

#include "ucfem/problems.hpp"
#include "ucfem/solver.hpp"

namespace ucfem {

struct RunConfig {
  ProblemSpec prob;
  std::vector<int> levels = {0, 1, 2};  // n = base_n * 2^level
  std::string study = "convergence";    // "convergence" or "sweep"
  std::string sweep_axis;  // gammaIF | alpha2 | kappaMode | includeNc | wavenumber | contrast
  std::vector<std::string> sweep_values;
  std::string out_csv;
  bool vtk = false;
  std::string vtk_prefix = "solution";
  bool runtime0 = false;  // report runtime_s as 0 for byte-stable output
};

/// Flat JSON config; CLI flags override individual keys afterwards.
RunConfig load_config(const std::string& path);

/// Geometry, spaces and solution of one refinement level.
struct LevelContext {
  std::unique_ptr<Mesh> mesh;
  std::unique_ptr<CutGeometry> geo;
  std::unique_ptr<Deformation> def;
  std::unique_ptr<DofNumbering> num;
  LevelSet ls;
  Discretization disc;
  Forms forms;
  Eigen::VectorXd u, z;
  SolveReport srep;
  double runtime_s = 0;
};

void build_level(const ProblemSpec& prob, int level, LevelContext& ctx);
/// Assembles, applies noise (seed + level), solves. Requires build_level.
void solve_level(const ProblemSpec& prob, int level, LevelContext& ctx);

struct LevelRow {
  int level = 0;
  double h = 0;
  long ndof = 0;
  double rel_l2_B = 0;
  double rel_h1_B = 0;
  double tnorm_err = 0;
  double dual_grad = 0;
  double geom_probe = 0;
  double runtime_s = 0;
};

/// Relative errors against the manufactured solution, restricted to the
/// target region by testing mapped quadrature points.
void compute_target_errors(const ProblemSpec& prob, LevelContext& ctx, double& rel_l2,
                           double& rel_h1);

LevelRow compute_row(const ProblemSpec& prob, int level, LevelContext& ctx);

/// EOC between consecutive entries of a factor-2 refinement sequence.
std::vector<double> eoc(const std::vector<double>& errors);

struct ConvergenceReport {
  std::vector<LevelRow> rows;
  std::vector<double> eoc_l2, eoc_h1, eoc_tnorm, eoc_dual;
};

struct SweepRow {
  std::string value;
  double rel_l2_B = 0;
  double rel_h1_B = 0;
};

struct SweepReport {
  std::string axis;
  std::vector<SweepRow> rows;
};

void write_convergence_csv(const std::string& path, const std::vector<LevelRow>& rows,
                           bool runtime0);
void write_sweep_csv(const std::string& path, const SweepReport& report);

ConvergenceReport run_convergence(const RunConfig& cfg);
/// One solve per axis value on the second-finest level of cfg.levels.
SweepReport run_sweep(const RunConfig& cfg);

}  // namespace ucfem
