#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "rcslasso/model.hpp"

namespace rcslasso {

/// Shared knobs for the reference solvers. `tolerance` bounds the exact
/// fixed-point residual of the returned iterate, so results are directly
/// comparable with the Newton solver.
struct BaselineOptions {
  double tolerance = 1e-8;
  int max_iterations = 50000;
  double admm_rho = 1.0;  // splitting penalty, ADMM only
};

/// Proximal gradient iteration x <- prox_{gamma lambda}(x - gamma grad f(x)).
SolverResult solve_lasso_ista(const LassoInstance& inst, const Eigen::VectorXd& x0,
                              const BaselineOptions& opts = {});

/// Accelerated proximal gradient with Nesterov momentum. The cheap
/// per-iteration test uses the fixed-point residual at the momentum point;
/// the returned iterate is re-certified exactly before the solver exits.
SolverResult solve_lasso_fista(const LassoInstance& inst,
                               const Eigen::VectorXd& x0,
                               const BaselineOptions& opts = {});

/// Factorization of rho I + A A^T backing the ADMM x-update. The row Gram
/// is invariant under cyclic column rotation, so one factorization serves
/// every window view of the same physical matrix.
struct AdmmFactorization {
  Eigen::MatrixXd gram_rows;  // rho I + A A^T, lower triangle valid
  Eigen::LLT<Eigen::MatrixXd> llt;
  double rho = 0.0;
};

AdmmFactorization make_admm_factorization(const SensingMatrix& a, double rho);

/// Scaled-form ADMM on the split f(x) + lambda ||z||_1, x = z. The x-update
/// solves (A^T A + rho I) x = q through the m x m Woodbury system
/// (rho I + A A^T), factorized once per solve — or reused across solves via
/// `cached` (must match opts.admm_rho). Returns the sparse z iterate after
/// an exact fixed-point residual check.
SolverResult solve_lasso_admm(const LassoInstance& inst, const Eigen::VectorXd& x0,
                              const BaselineOptions& opts = {},
                              const AdmmFactorization* cached = nullptr);

}  // namespace rcslasso
