#pragma once

/// Sparse direct solve of the saddle-point system with iterative refinement.

#include "ucfem/assembly.hpp"

namespace ucfem {

struct SolveReport {
  double rel_residual = 0;
  int refine_steps = 0;
  long nnz_matrix = 0;
  long nnz_factors = 0;
};

/// LU solve of K x = b. Applies up to two refinement sweeps when the relative
/// residual exceeds 1e-10 and throws if it still exceeds 1e-8.
Eigen::VectorXd solve_sparse(const SpMat& K, const Eigen::VectorXd& b, SolveReport* rep = nullptr);

}  // namespace ucfem
