#pragma once

/// Nodal Lagrange bases on the reference triangle (0,0),(1,0),(0,1) for
/// degrees 1..3, constructed once from a monomial Vandermonde system. Local
/// node layout: vertices, then (degree-1) nodes per edge in the order
/// (0,1),(1,2),(0,2) walking from the first to the second vertex, then
/// interior nodes.

#include <vector>

#include "ucfem/common.hpp"

namespace ucfem {

struct ShapeValues {
  Eigen::VectorXd N;                             // nloc
  Eigen::Matrix<double, Eigen::Dynamic, 2> dN;   // reference gradients
  std::vector<Mat2> d2N;                         // reference Hessians (optional)
};

class LagrangeBasis {
 public:
  static const LagrangeBasis& get(int degree);

  int degree() const { return degree_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Vec2>& nodes() const { return nodes_; }

  void eval(const Vec2& xi, ShapeValues& out, bool hessians = false) const;

 private:
  explicit LagrangeBasis(int degree);

  int degree_;
  std::vector<Vec2> nodes_;
  std::vector<std::pair<int, int>> monomials_;  // exponents (a, b)
  Eigen::MatrixXd coef_;                        // column j: monomial coefficients of shape j
};

}  // namespace ucfem
