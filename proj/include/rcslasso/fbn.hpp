#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "rcslasso/model.hpp"

namespace rcslasso {

/// Index partition behind the semismooth Newton step: alpha holds the
/// coordinates where |x_i - gamma grad_i| strictly exceeds gamma lambda_bar
/// (the current support estimate), beta the rest. `signs` stores
/// sign(x_i - gamma grad_i) for each alpha member, aligned with `alpha`.
struct ActiveSetPartition {
  std::vector<Eigen::Index> alpha;
  std::vector<Eigen::Index> beta;
  std::vector<double> signs;
};

ActiveSetPartition partition_indices(const LassoInstance& inst,
                                     const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& grad,
                                     double lambda_bar);

/// Semismooth Newton direction: d_beta = -x_beta and x_alpha + d_alpha
/// solves the |alpha| x |alpha| normal-equations system
/// A_alpha^T A_alpha (x_alpha + d_alpha) = A_alpha^T y - lambda_bar s_alpha.
/// Returns nullopt when |alpha| > m or the Cholesky factorization fails;
/// the caller falls back to a forward-backward step.
std::optional<Eigen::VectorXd> newton_direction(const LassoInstance& inst,
                                                const Eigen::VectorXd& x,
                                                const ActiveSetPartition& part,
                                                const Eigen::VectorXd& residual,
                                                double lambda_bar);

struct LineSearchResult {
  double step_size = 0.0;
  Eigen::VectorXd x_next;
  bool ok = false;
};

/// Backtracking Armijo search on the envelope: the first tau = 2^-i with
/// phi(x + tau d) <= phi(x) + zeta tau grad_phi(x)^T d is taken.
LineSearchResult line_search_armijo(const LassoInstance& inst,
                                    const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& d, double lambda_bar,
                                    double zeta, int max_backtracks);

/// Which weight multiplies epsilon_bar in the continuation trigger
/// ||R_gamma(x; lambda_bar)|| <= weight * epsilon_bar.
enum class ContinuationRule : std::uint8_t {
  CurrentLambda,  // current continuation weight lambda_bar
  TargetLambda,   // final target lambda
};

struct FbnOptions {
  double tolerance = 1e-8;   // on ||R_gamma(x)||_2 at the target lambda
  double eta = 0.5;          // continuation decrease factor, in (0,1)
  double zeta = 1e-4;        // Armijo constant, in (0, 1/2)
  std::size_t max_iterations = 500;
  int max_backtracks = 50;
  ContinuationRule continuation_rule = ContinuationRule::CurrentLambda;
};

/// Forward-Backward Newton with lambda-continuation. Starts from
/// lambda_bar = max(lambda, ||grad f(x0)||_inf) and drives it down to the
/// target while taking damped semismooth Newton steps; each accepted step
/// satisfies the Armijo condition on the envelope. `initial_residual`
/// optionally supplies A x0 - y so warm-started callers skip one
/// matrix-vector product.
SolverResult solve_lasso_fbn(const LassoInstance& inst, const Eigen::VectorXd& x0,
                             const FbnOptions& opts = {},
                             const Eigen::VectorXd* initial_residual = nullptr);

}  // namespace rcslasso
