#include "rcslasso/fbn.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "rcslasso/prox.hpp"

namespace rcslasso {

namespace {

ActiveSetPartition partition_from_forward(const Eigen::VectorXd& u,
                                          double threshold) {
  ActiveSetPartition part;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) > threshold) {
      part.alpha.push_back(i);
      part.signs.push_back(u[i] > 0.0 ? 1.0 : -1.0);
    } else {
      part.beta.push_back(i);
    }
  }
  return part;
}

void validate_options(const FbnOptions& opts) {
  if (!(opts.tolerance > 0.0))
    throw std::invalid_argument("FbnOptions: tolerance must be > 0");
  if (!(opts.eta > 0.0 && opts.eta < 1.0))
    throw std::invalid_argument("FbnOptions: eta must lie in (0, 1)");
  if (!(opts.zeta > 0.0 && opts.zeta < 0.5))
    throw std::invalid_argument("FbnOptions: zeta must lie in (0, 1/2)");
  if (opts.max_backtracks < 0)
    throw std::invalid_argument("FbnOptions: max_backtracks must be >= 0");
}

// State tied to the current iterate only; the continuation weight does not
// enter any of these quantities.
struct IterateState {
  Eigen::VectorXd x;
  Eigen::VectorXd ax;    // A x
  Eigen::VectorXd r;     // A x - y
  Eigen::VectorXd grad;  // A^T r
  Eigen::VectorXd u;     // x - gamma grad
};

double envelope_at(const IterateState& s, const Eigen::VectorXd& z,
                   double lambda_bar, double gamma) {
  const Eigen::VectorXd step = z - s.x;
  return 0.5 * s.r.squaredNorm() + s.grad.dot(step) + lambda_bar * z.lpNorm<1>() +
         step.squaredNorm() / (2.0 * gamma);
}

}  // namespace

ActiveSetPartition partition_indices(const LassoInstance& inst,
                                     const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& grad,
                                     double lambda_bar) {
  const Eigen::VectorXd u = x - inst.gamma * grad;
  return partition_from_forward(u, inst.gamma * lambda_bar);
}

std::optional<Eigen::VectorXd> newton_direction(const LassoInstance& inst,
                                                const Eigen::VectorXd& x,
                                                const ActiveSetPartition& part,
                                                const Eigen::VectorXd& residual,
                                                double lambda_bar) {
  const auto k = static_cast<Eigen::Index>(part.alpha.size());
  if (k > inst.rows()) return std::nullopt;

  // d_beta = -x_beta; the residual equals x on beta by construction.
  Eigen::VectorXd d = -x;
  (void)residual;
  if (k == 0) return d;

  const Eigen::MatrixXd a_alpha = inst.matrix.gather_columns(part.alpha);
  Eigen::MatrixXd gram(k, k);
  gram.triangularView<Eigen::Lower>() = a_alpha.transpose() * a_alpha;
  const Eigen::LLT<Eigen::MatrixXd> llt(gram.selfadjointView<Eigen::Lower>());
  if (llt.info() != Eigen::Success) return std::nullopt;

  Eigen::VectorXd rhs = a_alpha.transpose() * inst.y;
  for (Eigen::Index j = 0; j < k; ++j) rhs[j] -= lambda_bar * part.signs[j];
  const Eigen::VectorXd target = llt.solve(rhs);  // = x_alpha + d_alpha
  for (Eigen::Index j = 0; j < k; ++j) d[part.alpha[j]] = target[j] - x[part.alpha[j]];
  return d;
}

LineSearchResult line_search_armijo(const LassoInstance& inst,
                                    const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& d, double lambda_bar,
                                    double zeta, int max_backtracks) {
  LineSearchResult out;
  const double slope = fbe_gradient(inst, x, lambda_bar).dot(d);
  const double phi_x = fbe_value(inst, x, lambda_bar);
  double tau = 1.0;
  for (int i = 0; i <= max_backtracks; ++i) {
    Eigen::VectorXd trial = x + tau * d;
    if (fbe_value(inst, trial, lambda_bar) <= phi_x + zeta * tau * slope) {
      out.step_size = tau;
      out.x_next = std::move(trial);
      out.ok = true;
      return out;
    }
    tau *= 0.5;
  }
  return out;
}

SolverResult solve_lasso_fbn(const LassoInstance& inst, const Eigen::VectorXd& x0,
                             const FbnOptions& opts,
                             const Eigen::VectorXd* initial_residual) {
  validate_options(opts);
  const Eigen::Index n = inst.cols();
  const Eigen::Index m = inst.rows();
  if (x0.size() != n)
    throw std::invalid_argument("solve_lasso_fbn: x0 size must equal n");
  const double gamma = inst.gamma;
  const double lambda = inst.lambda;

  const auto t_start = std::chrono::steady_clock::now();

  IterateState s;
  s.x = x0;
  s.ax = initial_residual ? Eigen::VectorXd(*initial_residual + inst.y)
                          : inst.matrix.multiply(s.x);
  s.r = s.ax - inst.y;
  s.grad = inst.matrix.multiply_transpose(s.r);
  s.u = s.x - gamma * s.grad;

  double lambda_bar = std::max(lambda, s.grad.lpNorm<Eigen::Infinity>());
  double eps_bar = opts.tolerance;

  SolverResult result;
  result.status = SolveStatus::Converged;

  struct PendingStep {
    double tau;
    Eigen::Index active;
    StepKind kind;
    double lambda_bar;
  };
  std::optional<PendingStep> pending;

  Eigen::VectorXd z, residual;
  double res_norm = 0.0;

  const auto refresh_residual = [&]() {
    z = soft_threshold(s.u, gamma * lambda_bar);
    residual = s.x - z;
    res_norm = residual.norm();
  };

  while (true) {
    refresh_residual();

    // Post-step trace entry, evaluated under the weight the step used.
    if (pending) {
      result.trace.push_back({envelope_at(s, z, lambda_bar, gamma), res_norm,
                              pending->tau, pending->active, pending->lambda_bar,
                              pending->kind});
      pending.reset();
    }

    // Continuation: drop the weight whenever the subproblem is solved to
    // its stage accuracy; cascades when a warm start already covers
    // several stages.
    while (lambda_bar > lambda) {
      const double weight =
          opts.continuation_rule == ContinuationRule::CurrentLambda ? lambda_bar
                                                                    : lambda;
      if (res_norm > weight * eps_bar) break;
      lambda_bar = std::max(lambda, opts.eta * lambda_bar);
      eps_bar = std::max(opts.eta * eps_bar, opts.tolerance);
      refresh_residual();
    }

    if (lambda_bar <= lambda && res_norm <= opts.tolerance) break;
    if (result.iterations >= opts.max_iterations) {
      result.status = SolveStatus::MaxIterations;
      break;
    }

    ActiveSetPartition part = partition_from_forward(s.u, gamma * lambda_bar);
    const auto active = static_cast<Eigen::Index>(part.alpha.size());

    std::optional<Eigen::VectorXd> direction;
    if (active <= m)
      direction = newton_direction(inst, s.x, part, residual, lambda_bar);

    bool stepped = false;
    std::optional<Eigen::VectorXd> az_cache;

    if (direction) {
      const Eigen::VectorXd& d = *direction;
      az_cache = inst.matrix.multiply(z);
      const Eigen::VectorXd a_res = s.ax - *az_cache;  // A R
      const Eigen::VectorXd ad = inst.matrix.multiply(d);
      const double slope = residual.dot(d) / gamma - a_res.dot(ad);
      if (slope < 0.0) {
        const double phi_here = envelope_at(s, z, lambda_bar, gamma);
        double tau = 1.0;
        for (int i = 0; i <= opts.max_backtracks; ++i) {
          IterateState trial;
          trial.x = s.x + tau * d;
          trial.ax = s.ax + tau * ad;
          trial.r = trial.ax - inst.y;
          trial.grad = inst.matrix.multiply_transpose(trial.r);
          trial.u = trial.x - gamma * trial.grad;
          const Eigen::VectorXd trial_z =
              soft_threshold(trial.u, gamma * lambda_bar);
          const double phi_trial = envelope_at(trial, trial_z, lambda_bar, gamma);
          if (phi_trial <= phi_here + opts.zeta * tau * slope) {
            s = std::move(trial);
            pending = PendingStep{tau, active, StepKind::Newton, lambda_bar};
            stepped = true;
            break;
          }
          tau *= 0.5;
        }
        if (!stepped) {
          result.status = SolveStatus::BacktrackLimit;
          break;
        }
      }
      // Non-descent slope: the Newton model is unreliable here, fall
      // through to the globally safe forward-backward step.
    }

    if (!stepped) {
      IterateState next;
      next.x = z;
      next.ax = az_cache ? std::move(*az_cache) : inst.matrix.multiply(z);
      next.r = next.ax - inst.y;
      next.grad = inst.matrix.multiply_transpose(next.r);
      next.u = next.x - gamma * next.grad;
      s = std::move(next);
      pending = PendingStep{1.0, active, StepKind::ProxFallback, lambda_bar};
    }

    ++result.iterations;
  }

  result.elapsed = std::chrono::steady_clock::now() - t_start;
  result.x_hat = s.x;
  result.measurement_residual = s.r;
  result.residual_norm =
      lambda_bar == lambda
          ? res_norm
          : (s.x - soft_threshold(s.u, gamma * lambda)).norm();
  return result;
}

}  // namespace rcslasso
