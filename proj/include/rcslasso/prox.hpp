#pragma once

#include <Eigen/Dense>

#include "rcslasso/model.hpp"

namespace rcslasso {

/// Componentwise soft-thresholding, sign(z_i) * max(|z_i| - t, 0) with
/// sign(0) = 0. This is prox_{t ||.||_1}.
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& z, double t);

/// Measurement residual r = A x - y and gradient grad = A^T r of
/// f(x) = 1/2 ||A x - y||^2, kept together so the two matrix-vector
/// products are never repeated. A^T A is never formed.
struct ResidualCache {
  Eigen::VectorXd r;
  Eigen::VectorXd grad;
};

ResidualCache residual_cache(const LassoInstance& inst, const Eigen::VectorXd& x);

/// Forward-backward step T_gamma(x) = soft_threshold(x - gamma grad, gamma lambda).
Eigen::VectorXd forward_backward_step(const LassoInstance& inst,
                                      const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& grad,
                                      double lambda);

/// Fixed-point residual R_gamma(x) = x - T_gamma(x). Zero exactly at LASSO
/// solutions. The lambda override evaluates R_gamma(x; lambda_bar) for the
/// continuation loop.
Eigen::VectorXd fixed_point_residual(const LassoInstance& inst,
                                     const Eigen::VectorXd& x);
Eigen::VectorXd fixed_point_residual(const LassoInstance& inst,
                                     const Eigen::VectorXd& x, double lambda_bar);

/// Forward-Backward Envelope evaluated at its inner minimizer z = T_gamma(x):
/// f(x) + grad^T (z - x) + lambda ||z||_1 + ||z - x||^2 / (2 gamma).
double fbe_value(const LassoInstance& inst, const Eigen::VectorXd& x);
double fbe_value(const LassoInstance& inst, const Eigen::VectorXd& x,
                 double lambda_bar);

/// Gradient of the envelope, (R - gamma A^T (A R)) / gamma with
/// R = R_gamma(x).
Eigen::VectorXd fbe_gradient(const LassoInstance& inst, const Eigen::VectorXd& x);
Eigen::VectorXd fbe_gradient(const LassoInstance& inst, const Eigen::VectorXd& x,
                             double lambda_bar);

/// LASSO objective phi(x) = f(x) + lambda ||x||_1.
double objective_value(const LassoInstance& inst, const Eigen::VectorXd& x);

/// Direct check of the subdifferential optimality conditions:
/// grad_i = -lambda sign(x_i) on the support (within tol) and
/// |grad_i| <= lambda + tol off it.
bool satisfies_optimality(const LassoInstance& inst, const Eigen::VectorXd& x,
                          double tol);

}  // namespace rcslasso
