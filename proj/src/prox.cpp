#include "rcslasso/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace rcslasso {

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& z, double t) {
  if (t < 0.0) throw std::invalid_argument("soft_threshold: t must be >= 0");
  // Eigen's sign(0) is 0, which keeps the prox single-valued at the kink.
  return (z.array().sign() * (z.array().abs() - t).max(0.0)).matrix();
}

ResidualCache residual_cache(const LassoInstance& inst, const Eigen::VectorXd& x) {
  ResidualCache cache;
  cache.r = inst.matrix.multiply(x) - inst.y;
  cache.grad = inst.matrix.multiply_transpose(cache.r);
  return cache;
}

Eigen::VectorXd forward_backward_step(const LassoInstance& inst,
                                      const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& grad,
                                      double lambda) {
  return soft_threshold(x - inst.gamma * grad, inst.gamma * lambda);
}

Eigen::VectorXd fixed_point_residual(const LassoInstance& inst,
                                     const Eigen::VectorXd& x) {
  return fixed_point_residual(inst, x, inst.lambda);
}

Eigen::VectorXd fixed_point_residual(const LassoInstance& inst,
                                     const Eigen::VectorXd& x,
                                     double lambda_bar) {
  const ResidualCache cache = residual_cache(inst, x);
  return x - forward_backward_step(inst, x, cache.grad, lambda_bar);
}

double fbe_value(const LassoInstance& inst, const Eigen::VectorXd& x) {
  return fbe_value(inst, x, inst.lambda);
}

double fbe_value(const LassoInstance& inst, const Eigen::VectorXd& x,
                 double lambda_bar) {
  const ResidualCache cache = residual_cache(inst, x);
  const Eigen::VectorXd z = forward_backward_step(inst, x, cache.grad, lambda_bar);
  const Eigen::VectorXd step = z - x;
  return 0.5 * cache.r.squaredNorm() + cache.grad.dot(step) +
         lambda_bar * z.lpNorm<1>() + step.squaredNorm() / (2.0 * inst.gamma);
}

Eigen::VectorXd fbe_gradient(const LassoInstance& inst, const Eigen::VectorXd& x) {
  return fbe_gradient(inst, x, inst.lambda);
}

Eigen::VectorXd fbe_gradient(const LassoInstance& inst, const Eigen::VectorXd& x,
                             double lambda_bar) {
  const Eigen::VectorXd residual = fixed_point_residual(inst, x, lambda_bar);
  const Eigen::VectorXd curvature =
      inst.matrix.multiply_transpose(inst.matrix.multiply(residual));
  return residual / inst.gamma - curvature;
}

double objective_value(const LassoInstance& inst, const Eigen::VectorXd& x) {
  const Eigen::VectorXd r = inst.matrix.multiply(x) - inst.y;
  return 0.5 * r.squaredNorm() + inst.lambda * x.lpNorm<1>();
}

bool satisfies_optimality(const LassoInstance& inst, const Eigen::VectorXd& x,
                          double tol) {
  const ResidualCache cache = residual_cache(inst, x);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) {
      const double sign = x[i] > 0.0 ? 1.0 : -1.0;
      if (std::abs(cache.grad[i] + inst.lambda * sign) > tol) return false;
    } else if (std::abs(cache.grad[i]) > inst.lambda + tol) {
      return false;
    }
  }
  return true;
}

}  // namespace rcslasso
