#include "ucfem/levelset.hpp"

#include <cmath>

namespace ucfem {

LevelSet make_norm_levelset(int ell) {
  require(ell == 2 || ell == 4, "make_norm_levelset: ell must be 2 or 4");
  LevelSet ls;
  if (ell == 2) {
    ls.value = [](const Vec2& x) { return x.norm() - 1.0; };
    ls.gradient = [](const Vec2& x) { return Vec2(x / x.norm()); };
  } else {
    ls.value = [](const Vec2& x) {
      const double w = x.x() * x.x() * x.x() * x.x() + x.y() * x.y() * x.y() * x.y();
      return std::pow(w, 0.25) - 1.0;
    };
    ls.gradient = [](const Vec2& x) {
      const double w = x.x() * x.x() * x.x() * x.x() + x.y() * x.y() * x.y() * x.y();
      const double r3 = std::pow(w, 0.75);
      return Vec2(x.x() * x.x() * x.x() / r3, x.y() * x.y() * x.y() / r3);
    };
  }
  return ls;
}

}  // namespace ucfem
