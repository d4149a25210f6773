#include "ucfem/solver.hpp"

#include <Eigen/SparseLU>

namespace ucfem {

Eigen::VectorXd solve_sparse(const SpMat& K, const Eigen::VectorXd& b, SolveReport* rep) {
  require(K.rows() == K.cols(), "solve_sparse: matrix must be square");
  require(K.rows() == b.size(), "solve_sparse: dimension mismatch");

  SpMat A = K;
  A.makeCompressed();
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw std::runtime_error("solve_sparse: factorization failed");

  Eigen::VectorXd x = lu.solve(b);
  const double bnorm = std::max(b.norm(), 1e-300);
  double rel = (b - A * x).norm() / bnorm;
  int steps = 0;
  while (rel > 1e-10 && steps < 2) {
    const Eigen::VectorXd r = b - A * x;
    x += lu.solve(r);
    rel = (b - A * x).norm() / bnorm;
    ++steps;
  }
  if (rel > 1e-8) throw std::runtime_error("solve_sparse: residual did not converge");

  if (rep) {
    rep->rel_residual = rel;
    rep->refine_steps = steps;
    rep->nnz_matrix = static_cast<long>(A.nonZeros());
    rep->nnz_factors = static_cast<long>(lu.nnzL() + lu.nnzU());
  }
  return x;
}

}  // namespace ucfem
