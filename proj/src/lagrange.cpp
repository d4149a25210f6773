#include "ucfem/lagrange.hpp"

#include <array>
#include <cmath>

namespace ucfem {

namespace {

std::vector<Vec2> reference_nodes(int p) {
  std::vector<Vec2> nodes = {{0, 0}, {1, 0}, {0, 1}};
  const std::array<std::pair<int, int>, 3> edges = {{{0, 1}, {1, 2}, {0, 2}}};
  for (const auto& [a, b] : edges)
    for (int k = 1; k < p; ++k)
      nodes.push_back(nodes[static_cast<size_t>(a)] +
                      (static_cast<double>(k) / p) * (nodes[static_cast<size_t>(b)] - nodes[static_cast<size_t>(a)]));
  if (p == 3) nodes.emplace_back(1.0 / 3.0, 1.0 / 3.0);
  return nodes;
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

}  // namespace

LagrangeBasis::LagrangeBasis(int degree) : degree_(degree) {
  require(degree >= 1 && degree <= 3, "LagrangeBasis: degree must be in 1..3");
  nodes_ = reference_nodes(degree);
  for (int total = 0; total <= degree; ++total)
    for (int a = total; a >= 0; --a) monomials_.emplace_back(a, total - a);

  const int n = num_nodes();
  require(static_cast<int>(monomials_.size()) == n, "LagrangeBasis: node/monomial count mismatch");
  Eigen::MatrixXd V(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& [a, b] = monomials_[static_cast<size_t>(j)];
      V(i, j) = ipow(nodes_[static_cast<size_t>(i)].x(), a) * ipow(nodes_[static_cast<size_t>(i)].y(), b);
    }
  coef_ = V.inverse();  // column j holds the monomial coefficients of shape j
}

const LagrangeBasis& LagrangeBasis::get(int degree) {
  static const LagrangeBasis p1(1), p2(2), p3(3);
  switch (degree) {
    case 1: return p1;
    case 2: return p2;
    case 3: return p3;
    default: throw std::invalid_argument("LagrangeBasis::get: degree must be in 1..3");
  }
}

void LagrangeBasis::eval(const Vec2& xi, ShapeValues& out, bool hessians) const {
  const int n = num_nodes();
  Eigen::VectorXd m(n), mx(n), my(n), mxx(n), mxy(n), myy(n);
  for (int j = 0; j < n; ++j) {
    const auto& [a, b] = monomials_[static_cast<size_t>(j)];
    const double xa = ipow(xi.x(), a), yb = ipow(xi.y(), b);
    m(j) = xa * yb;
    mx(j) = a > 0 ? a * ipow(xi.x(), a - 1) * yb : 0.0;
    my(j) = b > 0 ? b * xa * ipow(xi.y(), b - 1) : 0.0;
    if (hessians) {
      mxx(j) = a > 1 ? a * (a - 1) * ipow(xi.x(), a - 2) * yb : 0.0;
      myy(j) = b > 1 ? b * (b - 1) * xa * ipow(xi.y(), b - 2) : 0.0;
      mxy(j) = (a > 0 && b > 0) ? a * b * ipow(xi.x(), a - 1) * ipow(xi.y(), b - 1) : 0.0;
    }
  }
  out.N = coef_.transpose() * m;
  out.dN.resize(n, 2);
  out.dN.col(0) = coef_.transpose() * mx;
  out.dN.col(1) = coef_.transpose() * my;
  if (hessians) {
    const Eigen::VectorXd hxx = coef_.transpose() * mxx;
    const Eigen::VectorXd hxy = coef_.transpose() * mxy;
    const Eigen::VectorXd hyy = coef_.transpose() * myy;
    out.d2N.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      out.d2N[static_cast<size_t>(j)] << hxx(j), hxy(j), hxy(j), hyy(j);
    }
  } else {
    out.d2N.clear();
  }
}

}  // namespace ucfem
