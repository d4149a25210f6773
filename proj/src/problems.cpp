#include "ucfem/problems.hpp"

#include <cmath>

namespace ucfem {

bool Region::contains(const Vec2& p) const {
  if (!outer.contains(p)) return false;
  if (has_inner && p.x() > inner.x0 && p.x() < inner.x1 && p.y() > inner.y0 && p.y() < inner.y1)
    return false;
  return true;
}

std::vector<Rect> Region::align_rects() const {
  std::vector<Rect> r = {outer};
  if (has_inner) r.push_back(inner);
  return r;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

double quartic(const Vec2& x) { return std::pow(x.x(), 4) + std::pow(x.y(), 4); }

Vec2 cubed(const Vec2& x) { return {x.x() * x.x() * x.x(), x.y() * x.y() * x.y()}; }

ProblemData diffusion_data(double mu1, double mu2) {
  const double b = mu1 * kPi / (mu2 * std::sqrt(2.0));
  const double shift = (1.0 + kPi * mu1 / mu2) / std::sqrt(2.0);
  ProblemData d;
  d.u[0] = [shift](const Vec2& x) { return shift - std::cos(kPi * quartic(x) / 4.0); };
  d.u[1] = [b](const Vec2& x) { return b * std::pow(quartic(x), 0.25); };
  d.grad_u[0] = [](const Vec2& x) -> Vec2 {
    return kPi * std::sin(kPi * quartic(x) / 4.0) * cubed(x);
  };
  d.grad_u[1] = [b](const Vec2& x) -> Vec2 {
    return b * std::pow(quartic(x), -0.75) * cubed(x);
  };
  d.f[0] = [mu1](const Vec2& x) {
    const double w = quartic(x);
    const double s6 = std::pow(x.x(), 6) + std::pow(x.y(), 6);
    const double s2 = x.squaredNorm();
    return -mu1 * kPi * (kPi * std::cos(kPi * w / 4.0) * s6 + 3.0 * std::sin(kPi * w / 4.0) * s2);
  };
  d.f[1] = [mu2, b](const Vec2& x) {
    const double w = quartic(x);
    const double s6 = std::pow(x.x(), 6) + std::pow(x.y(), 6);
    const double s2 = x.squaredNorm();
    return -3.0 * mu2 * b * (s2 * std::pow(w, -0.75) - s6 * std::pow(w, -1.75));
  };
  return d;
}

ProblemData helmholtz_data(double mu1, double mu2, double k1, double k2) {
  require(std::abs(std::sin(k1)) > 1e-3, "helmholtz_data: sin(k1) too close to zero");
  const double c1 = -(k2 * mu2 / (k1 * mu1)) * std::cos(k2) / std::sin(k1);
  const double c2 = std::sin(k2) - c1 * std::cos(k1);
  ProblemData d;
  d.u[0] = [c1, c2, k1](const Vec2& x) { return c1 * std::cos(k1 * quartic(x)) + c2; };
  d.u[1] = [k2](const Vec2& x) { return std::sin(k2 * quartic(x)); };
  d.grad_u[0] = [c1, k1](const Vec2& x) -> Vec2 {
    return -4.0 * k1 * c1 * std::sin(k1 * quartic(x)) * cubed(x);
  };
  d.grad_u[1] = [k2](const Vec2& x) -> Vec2 {
    return 4.0 * k2 * std::cos(k2 * quartic(x)) * cubed(x);
  };
  d.f[0] = [mu1, c1, c2, k1](const Vec2& x) {
    const double w = quartic(x);
    const double s6 = std::pow(x.x(), 6) + std::pow(x.y(), 6);
    const double s2 = x.squaredNorm();
    return 4.0 * mu1 * k1 * c1 * (4.0 * k1 * std::cos(k1 * w) * s6 + 3.0 * std::sin(k1 * w) * s2) -
           k1 * k1 * (c1 * std::cos(k1 * w) + c2);
  };
  d.f[1] = [mu2, k2](const Vec2& x) {
    const double w = quartic(x);
    const double s6 = std::pow(x.x(), 6) + std::pow(x.y(), 6);
    const double s2 = x.squaredNorm();
    return 16.0 * mu2 * k2 * k2 * std::sin(k2 * w) * s6 - 12.0 * mu2 * k2 * std::cos(k2 * w) * s2 -
           k2 * k2 * std::sin(k2 * w);
  };
  return d;
}

/// Smallest sign * phi over a sampling of the closed region boundary.
double boundary_margin(const Region& region, const LevelSet& ls, double sgn) {
  double margin = std::numeric_limits<double>::infinity();
  for (const Rect& r : region.align_rects()) {
    const std::array<Vec2, 4> c = {Vec2(r.x0, r.y0), Vec2(r.x1, r.y0), Vec2(r.x1, r.y1),
                                   Vec2(r.x0, r.y1)};
    const int ns = 64;
    for (int e = 0; e < 4; ++e)
      for (int i = 0; i <= ns; ++i) {
        const Vec2 x = c[static_cast<size_t>(e)] +
                       (static_cast<double>(i) / ns) * (c[static_cast<size_t>((e + 1) % 4)] - c[static_cast<size_t>(e)]);
        margin = std::min(margin, sgn * ls(x));
      }
  }
  return margin;
}

}  // namespace

std::vector<std::string> problem_ids() {
  return {"diffusion-l4", "helmholtz-l4-box", "helmholtz-l4-convex"};
}

ProblemSpec make_problem(const std::string& id) {
  ProblemSpec s;
  s.id = id;
  s.domain = {-1.5, -1.5, 1.5, 1.5};
  if (id == "diffusion-l4") {
    s.family = "diffusion";
    s.omega.outer = {-0.5, -0.5, 0.5, 0.5};
    s.target.outer = {-1.25, -1.25, 1.25, 1.25};
    s.omega_side = Side::neg;
    s.phys.mu1 = 2;
    s.phys.mu2 = 2;
    s.base_n = 12;
  } else if (id == "helmholtz-l4-box") {
    s.family = "helmholtz";
    s.omega.outer = {-0.8, -0.8, 0.8, 0.8};
    s.target.outer = {-1.1, -1.0, 1.1, 1.0};
    s.omega_side = Side::neg;
    s.phys.mu1 = 2;
    s.phys.mu2 = 2;
    s.k1 = 3;
    s.k2 = 1;
    s.base_n = 60;
  } else if (id == "helmholtz-l4-convex") {
    s.family = "helmholtz";
    s.omega.outer = {-1.5, -1.5, 1.5, 1.25};
    s.omega.has_inner = true;
    s.omega.inner = {-1.25, -1.25, 1.25, 1.25};
    s.target.outer = {-1.5, -1.5, 1.5, 1.25};
    s.omega_side = Side::pos;
    s.phys.mu1 = 1;
    s.phys.mu2 = 2;
    s.k1 = 16;
    s.k2 = 2;
    s.base_n = 12;
  } else {
    throw std::invalid_argument("make_problem: unknown problem id '" + id + "'");
  }
  finalize_problem(s);
  return s;
}

void finalize_problem(ProblemSpec& spec) {
  require(spec.ell == 4, "finalize_problem: manufactured solutions need ell = 4");
  require(spec.p >= 1 && spec.p <= 3, "finalize_problem: p must be in 1..3");
  require(spec.q >= 1 && spec.q <= spec.p, "finalize_problem: need 1 <= q <= p");
  require(spec.phys.mu1 > 0 && spec.phys.mu2 > 0, "finalize_problem: diffusivities must be positive");
  require(spec.stab.alpha1 > 0, "finalize_problem: alpha1 must be positive");
  require(spec.theta >= 0 && spec.theta <= 2, "finalize_problem: theta must be in {0,1,2}");

  if (spec.family == "diffusion") {
    spec.phys.rho1 = 0;
    spec.phys.rho2 = 0;
    spec.data = diffusion_data(spec.phys.mu1, spec.phys.mu2);
  } else if (spec.family == "helmholtz") {
    require(spec.k1 > 0 && spec.k2 > 0, "finalize_problem: wave numbers must be positive");
    spec.phys.rho1 = spec.k1 * spec.k1;
    spec.phys.rho2 = spec.k2 * spec.k2;
    spec.data = helmholtz_data(spec.phys.mu1, spec.phys.mu2, spec.k1, spec.k2);
  } else {
    throw std::invalid_argument("finalize_problem: unknown family '" + spec.family + "'");
  }

  const LevelSet ls = make_norm_levelset(spec.ell);
  const double sgn = spec.omega_side == Side::neg ? -1.0 : 1.0;
  require(boundary_margin(spec.omega, ls, sgn) >= 0.04,
          "finalize_problem: data region too close to the interface");
}

}  // namespace ucfem
