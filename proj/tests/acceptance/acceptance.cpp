// Acceptance gate: one self-contained check per release criterion, each
// printing a single [PASS]/[FAIL] line. Run with no arguments for all
// criteria or pass criterion numbers (e.g. "acceptance 3 5").

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rcslasso/baselines.hpp"
#include "rcslasso/bench.hpp"
#include "rcslasso/fbn.hpp"
#include "rcslasso/model.hpp"
#include "rcslasso/prox.hpp"
#include "rcslasso/rcs.hpp"
#include "rcslasso/rng.hpp"

using namespace rcslasso;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double upper = values[mid];
  if (values.size() % 2 == 0) {
    const double lower =
        *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lower + upper);
  }
  return upper;
}

// Planted s-sparse instance with dynamic-range magnitudes and Gaussian
// measurement noise; one independent seed per component.
struct PlantedInstance {
  LassoInstance problem;
  Eigen::VectorXd x_true;
};

PlantedInstance make_planted(std::uint64_t seed, Eigen::Index n, Eigen::Index m,
                             Eigen::Index s, double sigma) {
  const auto matrix =
      generate_sensing_matrix(m, n, derive_seed(seed, SeedPurpose::Matrix));
  Rng rng(derive_seed(seed, SeedPurpose::Stream));

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double low = 8.0 * sigma * std::sqrt(2.0 * std::log(double(n)));
  Eigen::Index placed = 0;
  while (placed < s) {
    const auto j = Eigen::Index(rng.raw() % std::uint64_t(n));
    if (x[j] != 0.0) continue;
    x[j] = rng.sign() * low * (1.0 + rng.uniform());
    ++placed;
  }

  Eigen::VectorXd y = matrix.multiply(x);
  Rng noise(derive_seed(seed, SeedPurpose::Noise));
  for (Eigen::Index i = 0; i < m; ++i) y[i] += sigma * noise.normal();

  const double lambda = 4.0 * sigma * std::sqrt(2.0 * std::log(double(n)));
  return {make_lasso_instance(matrix, y, lambda), x};
}

// ---- criterion 1: FBN / FISTA / ADMM agree pairwise ----
bool criterion_solver_agreement() {
  const auto start = Clock::now();
  const Eigen::Index n = 500, m = 100, s = 25;
  const double sigma = 0.1;

  double worst_pair = 0.0, worst_residual = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto planted = make_planted(seed, n, m, s, sigma);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);

    const auto fbn = solve_lasso_fbn(planted.problem, x0);
    const auto fista = solve_lasso_fista(planted.problem, x0);
    const auto admm = solve_lasso_admm(planted.problem, x0);
    if (!fbn.converged() || !fista.converged() || !admm.converged()) {
      std::printf(
          "[FAIL] criterion 1: a solver did not converge on seed %llu\n",
          static_cast<unsigned long long>(seed));
      return false;
    }

    worst_pair = std::max(
        {worst_pair,
         (fbn.x_hat - fista.x_hat).lpNorm<Eigen::Infinity>(),
         (fbn.x_hat - admm.x_hat).lpNorm<Eigen::Infinity>(),
         (fista.x_hat - admm.x_hat).lpNorm<Eigen::Infinity>()});
    worst_residual = std::max(worst_residual, fbn.residual_norm);
  }

  const double elapsed = seconds_since(start);
  const bool ok =
      worst_pair <= 1e-6 && worst_residual <= 1e-8 && elapsed < 120.0;
  std::printf(
      "[%s] criterion 1: solver agreement on 100 instances "
      "(max pairwise %.3g <= 1e-6, max FBN residual %.3g <= 1e-8, %.1fs < "
      "120s)\n",
      ok ? "PASS" : "FAIL", worst_pair, worst_residual, elapsed);
  return ok;
}

// ---- criterion 2: subdifferential certificate for every FBN solution ----
bool criterion_optimality_certificate() {
  const Eigen::Index n = 500, m = 100, s = 25;
  const double sigma = 0.1;

  double worst_on = 0.0, worst_off = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto planted = make_planted(seed, n, m, s, sigma);
    const auto res =
        solve_lasso_fbn(planted.problem, Eigen::VectorXd::Zero(n));
    if (!res.converged()) {
      std::printf("[FAIL] criterion 2: FBN did not converge on seed %llu\n",
                  static_cast<unsigned long long>(seed));
      return false;
    }

    const auto cache = residual_cache(planted.problem, res.x_hat);
    const double lambda = planted.problem.lambda;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (res.x_hat[i] != 0.0) {
        const double sign = res.x_hat[i] > 0.0 ? 1.0 : -1.0;
        worst_on = std::max(worst_on, std::abs(cache.grad[i] + lambda * sign));
      } else {
        worst_off = std::max(worst_off, std::abs(cache.grad[i]) - lambda);
      }
    }
  }

  const bool ok = worst_on <= 1e-6 && worst_off <= 1e-6;
  std::printf(
      "[%s] criterion 2: optimality certificate "
      "(max on-support |grad + lambda sign| %.3g <= 1e-6, max off-support "
      "|grad| - lambda %.3g <= 1e-6)\n",
      ok ? "PASS" : "FAIL", worst_on, worst_off);
  return ok;
}

// ---- criterion 3: envelope gradient vs finite differences + sandwich ----
bool criterion_envelope_gradient() {
  Rng rng(2024);
  double worst_grad = 0.0, worst_sandwich = 0.0;

  for (int pair = 0; pair < 50; ++pair) {
    const Eigen::Index n = 20 + Eigen::Index(rng.raw() % 21);  // 20..40
    const Eigen::Index m = n / 2;
    const auto matrix =
        generate_sensing_matrix(m, n, derive_seed(3000 + pair, SeedPurpose::Matrix));
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) y[i] = rng.normal();
    const auto inst = make_lasso_instance(matrix, y, 0.05 + 0.2 * rng.uniform());

    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i)
      x[i] = rng.uniform() < 0.4 ? 0.0 : rng.normal();

    const Eigen::VectorXd grad = fbe_gradient(inst, x);
    Eigen::VectorXd fd(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double h = 5e-6 * std::max(1.0, std::abs(x[i]));
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      fd[i] = (fbe_value(inst, xp) - fbe_value(inst, xm)) / (2.0 * h);
    }
    worst_grad = std::max(worst_grad, (grad - fd).norm() / fd.norm());

    const auto cache = residual_cache(inst, x);
    const Eigen::VectorXd z =
        forward_backward_step(inst, x, cache.grad, inst.lambda);
    const double envelope = fbe_value(inst, x);
    worst_sandwich = std::max(worst_sandwich,
                              objective_value(inst, z) - envelope);
    worst_sandwich = std::max(worst_sandwich,
                              envelope - objective_value(inst, x));
  }

  const bool ok = worst_grad <= 1e-5 && worst_sandwich <= 1e-12;
  std::printf(
      "[%s] criterion 3: envelope gradient check on 50 pairs "
      "(max FD relative error %.3g <= 1e-5, max sandwich violation %.3g <= "
      "1e-12)\n",
      ok ? "PASS" : "FAIL", worst_grad, worst_sandwich);
  return ok;
}

// ---- criterion 4: warm-start iteration economy on a long stream ----
bool criterion_warm_start_economy() {
  const auto start = Clock::now();
  const std::size_t length = 10000;
  const Eigen::Index n = 500;
  const double sparsity = 0.1, sigma = 0.1;

  const auto stream = generate_stream(length, sparsity, sigma,
                                      derive_seed(7, SeedPurpose::Stream));
  const auto params = window_params(std::size_t(n), sparsity, sigma);
  const auto matrix =
      generate_sensing_matrix(Eigen::Index(params.measurements), n,
                              derive_seed(7, SeedPurpose::Matrix));

  DecompressOptions opts;
  opts.noise_seed = 7;
  const auto run = decompress_stream(stream, matrix, opts);

  std::vector<double> warm;
  std::size_t failures = 0;
  for (std::size_t i = 1; i < run.windows.size(); ++i) {
    warm.push_back(double(run.windows[i].iterations));
    if (!run.windows[i].converged()) ++failures;
  }
  const double med = median_of(warm);
  const double elapsed = seconds_since(start);

  const bool ok = med <= 10.0 && failures == 0 && elapsed < 300.0;
  std::printf(
      "[%s] criterion 4: warm-start economy over %zu windows "
      "(median warm iterations %.1f <= 10, %zu failures, %.1fs < 300s)\n",
      ok ? "PASS" : "FAIL", run.windows.size(), med, failures, elapsed);
  return ok;
}

// ---- criterion 5: recursion identities over 10^4 windows ----
bool criterion_recursion_identities() {
  const std::size_t windows = 10000;
  const Eigen::Index n = 500;
  const std::size_t length = windows + std::size_t(n);

  const auto stream = generate_stream(length, 0.1, 0.0,
                                      derive_seed(11, SeedPurpose::Stream));
  const auto matrix = generate_sensing_matrix(
      200, n, derive_seed(11, SeedPurpose::Matrix));

  // sampling recursion vs direct multiply
  double worst_sample = 0.0;
  Eigen::VectorXd y = sample_window_noiseless(matrix, stream, 0);
  for (std::size_t i = 1; i < windows; ++i) {
    y = sample_window_recursive(y, matrix, stream, i);
    const Eigen::VectorXd direct = sample_window_noiseless(matrix, stream, i);
    worst_sample = std::max(
        worst_sample, (y - direct).norm() / std::max(1.0, direct.norm()));
  }

  // residual recursion vs direct residual, one step at a time
  double worst_residual = 0.0;
  Rng rng(derive_seed(11, SeedPurpose::Noise));
  Eigen::VectorXd y_prev = sample_window_noiseless(matrix, stream, 0);
  for (std::size_t i = 1; i <= windows; ++i) {
    Eigen::VectorXd x_prev =
        stream.values.segment(Eigen::Index(i - 1), n);
    for (Eigen::Index k = 0; k < n; ++k)
      if (rng.uniform() < 0.05) x_prev[k] += 0.1 * rng.normal();

    const Eigen::VectorXd y_new = sample_window_noiseless(matrix, stream, i);
    const Eigen::VectorXd r_prev =
        matrix.with_offset(Eigen::Index(i - 1)).multiply(x_prev) - y_prev;

    Eigen::VectorXd r = residual_update(r_prev, y_prev, y_new);
    r -= x_prev[0] * matrix.data().col(Eigen::Index((i - 1) % std::size_t(n)));

    const Eigen::VectorXd direct =
        matrix.with_offset(Eigen::Index(i)).multiply(warm_start(x_prev)) -
        y_new;
    worst_residual =
        std::max(worst_residual, (r - direct).lpNorm<Eigen::Infinity>());
    y_prev = y_new;
  }

  // a full turn of the cyclic view is exactly the identity
  const bool periodic =
      (matrix.with_offset(n).materialize().array() ==
       matrix.materialize().array())
          .all() &&
      matrix.with_offset(n).physical_column(0) == 0;

  const bool ok = worst_sample <= 1e-8 && worst_residual <= 1e-10 && periodic;
  std::printf(
      "[%s] criterion 5: recursion identities over %zu windows "
      "(max sampling error %.3g <= 1e-8, max residual error %.3g <= 1e-10, "
      "full-turn view %s)\n",
      ok ? "PASS" : "FAIL", windows, worst_sample, worst_residual,
      periodic ? "exact" : "broken");
  return ok;
}

// ---- criterion 6: exact sign-support recovery rate ----
bool criterion_support_recovery() {
  const Eigen::Index n = 500;
  const double sigma = 0.1;
  // Sign recovery needs measurements well above 2 s ln(n - s); the default
  // m = 4s sizing sits below that for every s at this n, so the check uses
  // a sparser signal with a measurement count that satisfies the condition.
  const Eigen::Index s = 10;
  const Eigen::Index m = 250;

  int exact = 0;
  const int total = 50;
  for (int trial = 0; trial < total; ++trial) {
    const auto planted = make_planted(9000 + trial, n, m, s, sigma);
    const auto res =
        solve_lasso_fbn(planted.problem, Eigen::VectorXd::Zero(n));
    if (!res.converged()) continue;

    bool match = true;
    for (Eigen::Index i = 0; i < n && match; ++i) {
      const double t = planted.x_true[i];
      const double e = res.x_hat[i];
      if ((t == 0.0) != (e == 0.0)) match = false;
      if (t != 0.0 && t * e <= 0.0) match = false;
    }
    if (match) ++exact;
  }

  const double rate = double(exact) / double(total);
  const bool ok = rate >= 0.9;
  std::printf(
      "[%s] criterion 6: exact sign-support recovery in %d/%d windows "
      "(rate %.2f >= 0.90; n=%d, m=%d, s=%d, lambda = 4 sigma sqrt(2 ln n))\n",
      ok ? "PASS" : "FAIL", exact, total, rate, int(n), int(m), int(s));
  return ok;
}

// ---- criterion 7: per-window decode time ordering ----
bool criterion_benchmark_ordering() {
  BenchmarkConfig config;
  config.window_sizes = {500, 1000, 2000};
  config.sparsities = {0.1};
  config.methods = {Method::Fbn, Method::Fista, Method::Admm};
  config.seeds = {1};
  config.stream_length = 2600;
  config.sigma = 0.1;  // sigma^2 = 0.01
  config.max_windows = 25;
  config.emit_window_rows = false;

  const auto records = run_benchmark(config);

  bool ok = true;
  std::string detail;
  for (Eigen::Index n : config.window_sizes) {
    double fbn = -1.0, fista = -1.0, admm = -1.0;
    for (const auto& rec : records) {
      if (rec.n != n || rec.window != -1) continue;
      if (rec.method == Method::Fbn) fbn = rec.time_ms;
      if (rec.method == Method::Fista) fista = rec.time_ms;
      if (rec.method == Method::Admm) admm = rec.time_ms;
    }
    ok = ok && fbn > 0.0 && fbn < fista && fbn < admm;
    char buf[128];
    std::snprintf(buf, sizeof(buf), " n=%lld: fbn %.2fms fista %.2fms admm %.2fms;",
                  static_cast<long long>(n), fbn, fista, admm);
    detail += buf;
  }

  std::printf(
      "[%s] criterion 7: FBN median window time below FISTA and ADMM at "
      "every size --%s\n",
      ok ? "PASS" : "FAIL", detail.c_str());
  return ok;
}

// ---- criterion 8: one Newton step from the optimal partition ----
bool criterion_finite_identification() {
  const Eigen::Index n = 500, m = 100, s = 25;
  const auto planted = make_planted(77, n, m, s, 0.1);
  const auto& inst = planted.problem;

  FbnOptions tight;
  tight.tolerance = 1e-12;
  const auto ref = solve_lasso_fbn(inst, Eigen::VectorXd::Zero(n), tight);
  if (!ref.converged()) {
    std::printf("[FAIL] criterion 8: reference solve did not converge\n");
    return false;
  }

  const auto ref_cache = residual_cache(inst, ref.x_hat);
  const auto ref_part =
      partition_indices(inst, ref.x_hat, ref_cache.grad, inst.lambda);

  // perturb on the support without leaving the optimal partition; halve
  // the perturbation until the forward point classifies every index the
  // same way it does at the solution
  Eigen::VectorXd x0;
  ActiveSetPartition part0;
  double scale = 0.05;
  for (;; scale *= 0.5) {
    if (scale < 1e-9) {
      std::printf(
          "[FAIL] criterion 8: no perturbation kept the optimal "
          "partition\n");
      return false;
    }
    x0 = ref.x_hat;
    Rng rng(555);
    for (const auto i : ref_part.alpha)
      x0[i] *= 1.0 + scale * (rng.uniform() - 0.5);
    const auto cache0 = residual_cache(inst, x0);
    part0 = partition_indices(inst, x0, cache0.grad, inst.lambda);
    if (part0.alpha == ref_part.alpha && part0.signs == ref_part.signs) break;
  }

  const auto direction = newton_direction(
      inst, x0, part0, fixed_point_residual(inst, x0), inst.lambda);
  if (!direction) {
    std::printf("[FAIL] criterion 8: Newton system was not solvable\n");
    return false;
  }
  const Eigen::VectorXd one_step = x0 + *direction;
  const double rel = (one_step - ref.x_hat).norm() / ref.x_hat.norm();

  // the full solver should also need only a couple of iterations from x0
  const auto quick = solve_lasso_fbn(inst, x0);
  const bool ok = rel <= 1e-10 && quick.converged() && quick.iterations <= 3;
  std::printf(
      "[%s] criterion 8: one unit Newton step from the optimal partition "
      "(relative distance %.3g <= 1e-10; restarted solve finished in %zu "
      "iterations)\n",
      ok ? "PASS" : "FAIL", rel, quick.iterations);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<bool()>>> criteria = {
      {1, criterion_solver_agreement},
      {2, criterion_optimality_certificate},
      {3, criterion_envelope_gradient},
      {4, criterion_warm_start_economy},
      {5, criterion_recursion_identities},
      {6, criterion_support_recovery},
      {7, criterion_benchmark_ordering},
      {8, criterion_finite_identification},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  bool all_ok = true;
  for (const auto& [number, run] : criteria) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), number) == selected.end())
      continue;
    all_ok = run() && all_ok;
  }
  return all_ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
