#include "rcslasso/baselines.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "rcslasso/prox.hpp"

namespace rcslasso {

namespace {

void validate_options(const BaselineOptions& opts) {
  if (!(opts.tolerance > 0.0))
    throw std::invalid_argument("BaselineOptions: tolerance must be > 0");
  if (!(opts.admm_rho > 0.0))
    throw std::invalid_argument("BaselineOptions: admm_rho must be > 0");
}

void check_start(const LassoInstance& inst, const Eigen::VectorXd& x0) {
  if (x0.size() != inst.cols())
    throw std::invalid_argument("baseline solver: x0 size must equal n");
}

Eigen::Index count_nonzeros(const Eigen::VectorXd& v) {
  return (v.array() != 0.0).count();
}

}  // namespace

SolverResult solve_lasso_ista(const LassoInstance& inst, const Eigen::VectorXd& x0,
                              const BaselineOptions& opts) {
  validate_options(opts);
  check_start(inst, x0);
  const double gamma = inst.gamma;
  const auto t_start = std::chrono::steady_clock::now();

  SolverResult result;
  Eigen::VectorXd x = x0;
  Eigen::VectorXd ax = inst.matrix.multiply(x);
  double res_norm = 0.0;

  while (true) {
    const Eigen::VectorXd r = ax - inst.y;
    const Eigen::VectorXd grad = inst.matrix.multiply_transpose(r);
    const Eigen::VectorXd z = soft_threshold(x - gamma * grad, gamma * inst.lambda);
    const Eigen::VectorXd residual = x - z;
    res_norm = residual.norm();

    if (result.iterations > 0) {
      const double fbe = 0.5 * r.squaredNorm() - grad.dot(residual) +
                         inst.lambda * z.lpNorm<1>() +
                         residual.squaredNorm() / (2.0 * gamma);
      result.trace.push_back({fbe, res_norm, 1.0, count_nonzeros(x), inst.lambda,
                              StepKind::Gradient});
    }

    result.measurement_residual = r;
    if (res_norm <= opts.tolerance) break;
    if (static_cast<int>(result.iterations) >= opts.max_iterations) {
      result.status = SolveStatus::MaxIterations;
      break;
    }

    x = z;
    ax = inst.matrix.multiply(x);
    ++result.iterations;
  }

  result.elapsed = std::chrono::steady_clock::now() - t_start;
  result.x_hat = std::move(x);
  result.residual_norm = res_norm;
  return result;
}

SolverResult solve_lasso_fista(const LassoInstance& inst,
                               const Eigen::VectorXd& x0,
                               const BaselineOptions& opts) {
  validate_options(opts);
  check_start(inst, x0);
  const double gamma = inst.gamma;
  const auto t_start = std::chrono::steady_clock::now();

  SolverResult result;
  Eigen::VectorXd x = x0;
  Eigen::VectorXd v = x0;  // momentum point
  Eigen::VectorXd ax = inst.matrix.multiply(x);
  Eigen::VectorXd av = ax;
  double t = 1.0;

  // Certifies a candidate with the exact fixed-point residual; only called
  // once the cheap momentum-point residual is already below tolerance.
  const auto certify = [&](const Eigen::VectorXd& cand,
                           const Eigen::VectorXd& a_cand) {
    const Eigen::VectorXd r = a_cand - inst.y;
    const Eigen::VectorXd grad = inst.matrix.multiply_transpose(r);
    const double exact =
        (cand - soft_threshold(cand - gamma * grad, gamma * inst.lambda)).norm();
    if (exact <= opts.tolerance) {
      result.x_hat = cand;
      result.residual_norm = exact;
      result.measurement_residual = r;
      return true;
    }
    return false;
  };

  bool certified = certify(x, ax);
  while (!certified) {
    const Eigen::VectorXd rv = av - inst.y;
    const Eigen::VectorXd grad_v = inst.matrix.multiply_transpose(rv);
    const Eigen::VectorXd z =
        soft_threshold(v - gamma * grad_v, gamma * inst.lambda);
    const Eigen::VectorXd residual_v = v - z;
    const double res_norm_v = residual_v.norm();
    const Eigen::VectorXd az = inst.matrix.multiply(z);

    const double fbe = 0.5 * rv.squaredNorm() - grad_v.dot(residual_v) +
                       inst.lambda * z.lpNorm<1>() +
                       residual_v.squaredNorm() / (2.0 * gamma);
    result.trace.push_back({fbe, res_norm_v, 1.0, count_nonzeros(z), inst.lambda,
                            StepKind::Gradient});
    ++result.iterations;

    if (res_norm_v <= opts.tolerance && certify(z, az)) {
      certified = true;
      break;
    }
    if (static_cast<int>(result.iterations) >= opts.max_iterations) {
      result.status = SolveStatus::MaxIterations;
      x = z;
      ax = az;
      break;
    }

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double theta = (t - 1.0) / t_next;
    v = z + theta * (z - x);
    av = az + theta * (az - ax);
    x = z;
    ax = az;
    t = t_next;
  }

  if (!certified) {
    // Ran out of iterations: report the exact residual of the last iterate.
    const Eigen::VectorXd r = ax - inst.y;
    const Eigen::VectorXd grad = inst.matrix.multiply_transpose(r);
    result.x_hat = x;
    result.residual_norm =
        (x - soft_threshold(x - gamma * grad, gamma * inst.lambda)).norm();
    result.measurement_residual = r;
  }

  result.elapsed = std::chrono::steady_clock::now() - t_start;
  return result;
}

AdmmFactorization make_admm_factorization(const SensingMatrix& a, double rho) {
  if (!(rho > 0.0))
    throw std::invalid_argument("make_admm_factorization: rho must be > 0");
  // rho I + A A^T is invariant under the cyclic column rotation, so one
  // factorization of the physical data serves every window view.
  AdmmFactorization fact;
  fact.rho = rho;
  const Eigen::MatrixXd& data = a.data();
  const Eigen::Index m = data.rows();
  fact.gram_rows.resize(m, m);
  fact.gram_rows.triangularView<Eigen::Lower>() = data * data.transpose();
  fact.gram_rows.diagonal().array() += rho;
  fact.llt.compute(fact.gram_rows.selfadjointView<Eigen::Lower>());
  if (fact.llt.info() != Eigen::Success)
    throw std::runtime_error("make_admm_factorization: factorization failed");
  return fact;
}

SolverResult solve_lasso_admm(const LassoInstance& inst, const Eigen::VectorXd& x0,
                              const BaselineOptions& opts,
                              const AdmmFactorization* cached) {
  validate_options(opts);
  check_start(inst, x0);
  const double gamma = inst.gamma;
  const double rho = opts.admm_rho;
  if (cached && cached->rho != rho)
    throw std::invalid_argument(
        "solve_lasso_admm: cached factorization built for a different rho");
  const auto t_start = std::chrono::steady_clock::now();

  const AdmmFactorization local =
      cached ? AdmmFactorization{} : make_admm_factorization(inst.matrix, rho);
  const AdmmFactorization& fact = cached ? *cached : local;
  const Eigen::MatrixXd& gram_rows = fact.gram_rows;
  const Eigen::LLT<Eigen::MatrixXd>& llt = fact.llt;

  const Eigen::VectorXd aty = inst.matrix.multiply_transpose(inst.y);

  SolverResult result;
  Eigen::VectorXd z = x0;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(inst.cols());  // scaled dual
  bool certified = false;

  const auto certify = [&](const Eigen::VectorXd& cand) {
    const Eigen::VectorXd r = inst.matrix.multiply(cand) - inst.y;
    const Eigen::VectorXd grad = inst.matrix.multiply_transpose(r);
    const double exact =
        (cand - soft_threshold(cand - gamma * grad, gamma * inst.lambda)).norm();
    if (exact <= opts.tolerance) {
      result.residual_norm = exact;
      result.measurement_residual = r;
      return true;
    }
    return false;
  };

  if (certify(z)) {
    certified = true;
  } else {
    while (true) {
      const Eigen::VectorXd q = aty + rho * (z - w);
      const Eigen::VectorXd aq = inst.matrix.multiply(q);
      const Eigen::VectorXd h = llt.solve(aq);
      const Eigen::VectorXd x = (q - inst.matrix.multiply_transpose(h)) / rho;
      const Eigen::VectorXd ax =
          (aq - gram_rows.selfadjointView<Eigen::Lower>() * h + rho * h) / rho;

      const Eigen::VectorXd z_prev = std::move(z);
      z = soft_threshold(x + w, inst.lambda / rho);
      w += x - z;

      const double primal = (x - z).norm();
      const double dual = rho * (z - z_prev).norm();
      ++result.iterations;

      const double objective =
          0.5 * (ax - inst.y).squaredNorm() + inst.lambda * z.lpNorm<1>();
      result.trace.push_back({objective, primal, 1.0, count_nonzeros(z),
                              inst.lambda, StepKind::Splitting});

      // Cheap gate before paying for the exact residual check.
      const double gate = 10.0 * opts.tolerance;
      if (primal <= gate * std::max(1.0, z.norm()) &&
          dual <= gate * std::max(1.0, rho * w.norm()) && certify(z)) {
        certified = true;
        break;
      }
      if (static_cast<int>(result.iterations) >= opts.max_iterations) {
        result.status = SolveStatus::MaxIterations;
        break;
      }
    }
  }

  if (!certified) {
    const Eigen::VectorXd r = inst.matrix.multiply(z) - inst.y;
    const Eigen::VectorXd grad = inst.matrix.multiply_transpose(r);
    result.residual_norm =
        (z - soft_threshold(z - gamma * grad, gamma * inst.lambda)).norm();
    result.measurement_residual = r;
  }

  result.elapsed = std::chrono::steady_clock::now() - t_start;
  result.x_hat = std::move(z);
  return result;
}

}  // namespace rcslasso
