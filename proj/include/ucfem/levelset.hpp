#pragma once

/// Level set descriptions of the material interface. The interface is the
/// zero set; the negative side is subdomain 1, the positive side subdomain 2.

#include <functional>

#include "ucfem/common.hpp"

namespace ucfem {

struct LevelSet {
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> gradient;  // exact gradient, used by oracles

  double operator()(const Vec2& x) const { return value(x); }
};

/// phi(x) = ||x||_ell - 1 for ell in {2, 4}: circle / rounded-square interface.
LevelSet make_norm_levelset(int ell);

}  // namespace ucfem
