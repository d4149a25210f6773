#pragma once

/// Catalog of unique-continuation benchmark problems: interface geometry,
/// data/target regions, material parameters, and manufactured solutions with
/// matching sources. Measurements live in omega on one side of the interface;
/// errors are reported in the larger target region crossing it.

#include <string>
#include <vector>

#include "ucfem/assembly.hpp"
#include "ucfem/levelset.hpp"

namespace ucfem {

/// Axis-aligned region, optionally with a rectangular hole.
struct Region {
  Rect outer;
  bool has_inner = false;
  Rect inner;

  bool contains(const Vec2& p) const;
  /// Rectangles whose corners must land on grid lines.
  std::vector<Rect> align_rects() const;
};

struct ProblemSpec {
  std::string id;
  std::string family;  // "diffusion" or "helmholtz"
  int ell = 4;         // levelset norm exponent
  Rect domain;
  Region omega;
  Region target;
  Side omega_side = Side::neg;
  PhysParams phys;
  StabParams stab;
  double k1 = 0, k2 = 0;  // wave numbers (helmholtz only)
  int base_n = 12;
  int p = 2;
  int q = 2;
  int quad_order = -1;  // -1: 2p+2
  double delta_tilde = 0;
  int theta = 0;
  uint64_t seed = 20260822;
  ProblemData data;
};

std::vector<std::string> problem_ids();
ProblemSpec make_problem(const std::string& id);

/// Rebuilds derived quantities (rho, solution/source closures) after parameter
/// overrides and validates the configuration.
void finalize_problem(ProblemSpec& spec);

}  // namespace ucfem
