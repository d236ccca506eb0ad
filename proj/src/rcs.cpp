#include "rcslasso/rcs.hpp"

#include <cmath>
#include <stdexcept>

#include "rcslasso/rng.hpp"

namespace rcslasso {

namespace {

void check_window_range(const SensingMatrix& a, const StreamSource& stream,
                        std::size_t window) {
  const auto n = static_cast<std::size_t>(a.cols());
  if (window + n > stream.length)
    throw std::out_of_range("window extends past the end of the stream");
}

Eigen::VectorXd window_entries(const StreamSource& stream, std::size_t window,
                               Eigen::Index n) {
  return stream.values.segment(static_cast<Eigen::Index>(window), n);
}

/// Least-squares refit of y on the columns flagged by |raw| > threshold;
/// unflagged entries stay zero.
Eigen::VectorXd debias_refit(const SensingMatrix& view, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& raw, double threshold) {
  std::vector<Eigen::Index> flagged;
  for (Eigen::Index i = 0; i < raw.size(); ++i)
    if (std::abs(raw[i]) > threshold) flagged.push_back(i);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(raw.size());
  if (flagged.empty()) return out;
  const Eigen::MatrixXd cols = view.gather_columns(flagged);
  const Eigen::VectorXd fit = cols.colPivHouseholderQr().solve(y);
  for (std::size_t k = 0; k < flagged.size(); ++k) out[flagged[k]] = fit[k];
  return out;
}

SolverResult solve_window(const LassoInstance& inst, const WindowState& state,
                          const DecompressOptions& opts,
                          const AdmmFactorization* admm_cache) {
  switch (opts.solver) {
    case Method::Fbn: {
      const Eigen::VectorXd* r0 =
          opts.residual_recursion ? &state.r : nullptr;
      return solve_lasso_fbn(inst, state.x_warm, opts.fbn, r0);
    }
    case Method::Ista:
      return solve_lasso_ista(inst, state.x_warm, opts.baseline);
    case Method::Fista:
      return solve_lasso_fista(inst, state.x_warm, opts.baseline);
    case Method::Admm:
      return solve_lasso_admm(inst, state.x_warm, opts.baseline, admm_cache);
  }
  throw std::logic_error("solve_window: unknown method");
}

StreamDecodeResult run_pipeline(
    const SensingMatrix& a, double lambda, std::size_t window_count,
    const std::function<Eigen::VectorXd(std::size_t)>& measurement_at,
    const StreamSource* truth, const DecompressOptions& opts) {
  const Eigen::Index n = a.cols();
  if (!(lambda > 0.0))
    throw std::invalid_argument(
        "decompress: lambda must be positive (sigma = 0 streams need an "
        "explicit lambda)");
  if (!(opts.gamma_frac > 0.0 && opts.gamma_frac < 1.0))
    throw std::invalid_argument("decompress: gamma_frac must lie in (0, 1)");
  const double gamma =
      opts.gamma > 0.0
          ? opts.gamma
          : opts.gamma_frac / (a.operator_norm() * a.operator_norm());
  const double threshold =
      opts.support_threshold >= 0.0 ? opts.support_threshold : 0.5 * lambda;
  if (!(opts.vote_fraction >= 0.0 && opts.vote_fraction < 1.0))
    throw std::invalid_argument("decompress: vote_fraction must lie in [0, 1)");

  std::optional<AdmmFactorization> admm_cache;
  if (opts.solver == Method::Admm)
    admm_cache = make_admm_factorization(a, opts.baseline.admm_rho);

  const std::size_t entries =
      truth ? truth->length : static_cast<std::size_t>(n) + window_count - 1;
  Eigen::VectorXd debiased_sum = Eigen::VectorXd::Zero(entries);
  std::vector<std::uint32_t> votes(entries, 0);
  std::vector<std::uint32_t> coverage(entries, 0);

  StreamDecodeResult out;
  out.lambda = lambda;
  out.gamma = gamma;
  out.windows.reserve(window_count);

  // State carried from the previous converged window.
  Eigen::VectorXd x_prev, y_prev, r_prev;
  bool have_prev = false;

  for (std::size_t i = 0; i < window_count; ++i) {
    const SensingMatrix view = a.with_offset(static_cast<Eigen::Index>(i % n));

    WindowState state;
    state.index = i;
    state.y = measurement_at(i);
    if (have_prev) {
      state.x_warm = warm_start(x_prev);
      // Rotation-form residual carry, then remove the contribution of the
      // entry the zero-append start drops (it wraps into the last logical
      // column, physical column (i-1) mod n).
      state.r = residual_update(r_prev, y_prev, state.y);
      if (x_prev[0] != 0.0)
        state.r -= x_prev[0] * a.data().col(static_cast<Eigen::Index>((i - 1) % n));
    } else {
      state.x_warm = Eigen::VectorXd::Zero(n);
      state.r = -state.y;
    }

    const LassoInstance inst = make_lasso_instance(view, state.y, lambda, gamma);
    const SolverResult res = solve_window(inst, state, opts,
                                          admm_cache ? &*admm_cache : nullptr);

    WindowReport report;
    report.index = i;
    report.iterations = res.iterations;
    report.time_ms = res.elapsed.count();
    report.residual_norm = res.residual_norm;
    report.status = res.status;
    report.cold_start = !have_prev;

    const Eigen::VectorXd& raw = res.x_hat;
    const Eigen::VectorXd debiased =
        opts.debias ? debias_refit(view, state.y, raw, threshold) : raw;
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::size_t k = i + static_cast<std::size_t>(j);
      ++coverage[k];
      if (std::abs(raw[j]) > threshold) {
        ++votes[k];
        debiased_sum[static_cast<Eigen::Index>(k)] += debiased[j];
      }
    }
    if (truth)
      report.support_f1 = support_f1(
          raw, window_entries(*truth, i, n), threshold);

    if (opts.on_window) opts.on_window(report, res, debiased);
    out.windows.push_back(report);

    if (res.converged()) {
      x_prev = res.x_hat;
      y_prev = std::move(state.y);
      r_prev = res.measurement_residual;
      have_prev = true;
    } else {
      have_prev = false;  // cold-start the next window
    }
  }

  StreamEstimate& est = out.estimate;
  est.combined = Eigen::VectorXd::Zero(entries);
  est.support.assign(entries, 0);
  for (std::size_t k = 0; k < entries; ++k) {
    if (coverage[k] == 0) continue;
    if (static_cast<double>(votes[k]) >
        opts.vote_fraction * static_cast<double>(coverage[k])) {
      est.support[k] = 1;
      est.combined[static_cast<Eigen::Index>(k)] =
          debiased_sum[static_cast<Eigen::Index>(k)] / votes[k];
    }
  }
  est.votes = std::move(votes);
  est.coverage = std::move(coverage);
  return out;
}

}  // namespace

std::string method_name(Method method) {
  switch (method) {
    case Method::Fbn: return "fbn";
    case Method::Ista: return "ista";
    case Method::Fista: return "fista";
    case Method::Admm: return "admm";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "fbn") return Method::Fbn;
  if (name == "ista") return Method::Ista;
  if (name == "fista") return Method::Fista;
  if (name == "admm") return Method::Admm;
  return std::nullopt;
}

Eigen::VectorXd window_noise(Eigen::Index m, double sigma,
                             std::uint64_t noise_seed, std::size_t window) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  if (sigma == 0.0) return w;
  Rng rng(derive_seed(noise_seed, SeedPurpose::Noise, window));
  for (Eigen::Index i = 0; i < m; ++i) w[i] = sigma * rng.normal();
  return w;
}

Eigen::VectorXd sample_window_noiseless(const SensingMatrix& a,
                                        const StreamSource& stream,
                                        std::size_t window) {
  check_window_range(a, stream, window);
  const Eigen::Index n = a.cols();
  return a.with_offset(static_cast<Eigen::Index>(window % static_cast<std::size_t>(n)))
      .multiply(window_entries(stream, window, n));
}

Eigen::VectorXd sample_window(const SensingMatrix& a, const StreamSource& stream,
                              std::size_t window, std::uint64_t noise_seed) {
  return sample_window_noiseless(a, stream, window) +
         window_noise(a.rows(), stream.sigma, noise_seed, window);
}

Eigen::VectorXd sample_window_recursive(const Eigen::VectorXd& prev_y_noiseless,
                                        const SensingMatrix& a,
                                        const StreamSource& stream,
                                        std::size_t window) {
  if (window == 0)
    throw std::out_of_range("recursive sampling needs a previous window");
  check_window_range(a, stream, window);
  if (prev_y_noiseless.size() != a.rows())
    throw std::invalid_argument("previous measurement has wrong size");
  const auto n = static_cast<std::size_t>(a.cols());
  const auto leaving = static_cast<Eigen::Index>(window - 1);
  const auto entering = static_cast<Eigen::Index>(window - 1 + n);
  const double delta = stream.values[entering] - stream.values[leaving];
  return prev_y_noiseless +
         delta * a.data().col(static_cast<Eigen::Index>((window - 1) % n));
}

Eigen::VectorXd warm_start(const Eigen::VectorXd& prev_solution) {
  const Eigen::Index n = prev_solution.size();
  Eigen::VectorXd next(n);
  if (n == 0) return next;
  next.head(n - 1) = prev_solution.tail(n - 1);
  next[n - 1] = 0.0;
  return next;
}

Eigen::VectorXd residual_update(const Eigen::VectorXd& r_prev,
                                const Eigen::VectorXd& y_prev,
                                const Eigen::VectorXd& y_new) {
  return r_prev + y_prev - y_new;
}

std::pair<double, bool> combine_estimates(const std::vector<double>& raw,
                                          const std::vector<double>& debiased,
                                          const CombineTuning& tuning) {
  if (raw.empty())
    throw std::invalid_argument("combine_estimates: need at least one estimate");
  if (raw.size() != debiased.size())
    throw std::invalid_argument("combine_estimates: list sizes differ");
  std::size_t votes = 0;
  double sum = 0.0;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (std::abs(raw[k]) > tuning.support_threshold) {
      ++votes;
      sum += debiased[k];
    }
  }
  const bool flagged = static_cast<double>(votes) >
                       tuning.vote_fraction * static_cast<double>(raw.size());
  return {flagged ? sum / static_cast<double>(votes) : 0.0, flagged};
}

std::pair<double, bool> combine_estimates(const std::vector<double>& estimates,
                                          const CombineTuning& tuning) {
  return combine_estimates(estimates, estimates, tuning);
}

StreamDecodeResult decompress_stream(const StreamSource& stream,
                                     const SensingMatrix& a,
                                     const DecompressOptions& opts) {
  const auto n = static_cast<std::size_t>(a.cols());
  if (stream.length < n)
    throw std::invalid_argument("decompress_stream: stream shorter than window");
  const std::size_t total = stream.length - n + 1;
  const std::size_t count =
      opts.max_windows > 0 ? std::min(opts.max_windows, total) : total;
  const double lambda =
      opts.lambda > 0.0
          ? opts.lambda
          : window_params(n, stream.sparsity, stream.sigma).lambda;

  // Noiseless measurements are carried by the rank-1 recursion; fresh noise
  // is layered per window so the recursion stays exact.
  Eigen::VectorXd y_clean;
  const auto measurement_at = [&](std::size_t i) {
    if (i == 0 || !opts.recursive_sampling)
      y_clean = sample_window_noiseless(a, stream, i);
    else
      y_clean = sample_window_recursive(y_clean, a, stream, i);
    return Eigen::VectorXd(y_clean + window_noise(a.rows(), stream.sigma,
                                                  opts.noise_seed, i));
  };
  return run_pipeline(a, lambda, count, measurement_at, &stream, opts);
}

StreamDecodeResult decompress_measurements(const std::vector<Eigen::VectorXd>& ys,
                                           const SensingMatrix& a, double lambda,
                                           const DecompressOptions& opts) {
  if (ys.empty())
    throw std::invalid_argument("decompress_measurements: no windows given");
  for (const auto& y : ys)
    if (y.size() != a.rows())
      throw std::invalid_argument(
          "decompress_measurements: measurement size mismatch");
  const std::size_t count =
      opts.max_windows > 0 ? std::min(opts.max_windows, ys.size()) : ys.size();
  const auto measurement_at = [&](std::size_t i) { return ys[i]; };
  return run_pipeline(a, lambda, count, measurement_at, nullptr, opts);
}

double support_f1(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth,
                  double threshold) {
  if (estimate.size() != truth.size())
    throw std::invalid_argument("support_f1: size mismatch");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (Eigen::Index i = 0; i < estimate.size(); ++i) {
    const bool est = std::abs(estimate[i]) > threshold;
    const bool tru = truth[i] != 0.0;
    tp += est && tru;
    fp += est && !tru;
    fn += !est && tru;
  }
  if (tp + fp + fn == 0) return 1.0;  // both supports empty
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

double support_f1(const StreamEstimate& estimate, const Eigen::VectorXd& truth) {
  if (static_cast<Eigen::Index>(estimate.support.size()) != truth.size())
    throw std::invalid_argument("support_f1: size mismatch");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    const bool est = estimate.support[static_cast<std::size_t>(i)] != 0;
    const bool tru = truth[i] != 0.0;
    tp += est && tru;
    fp += est && !tru;
    fn += !est && tru;
  }
  if (tp + fp + fn == 0) return 1.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

}  // namespace rcslasso
