#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rcslasso/baselines.hpp"
#include "rcslasso/fbn.hpp"
#include "rcslasso/model.hpp"

namespace rcslasso {

enum class Method { Fbn, Ista, Fista, Admm };

std::string method_name(Method method);
std::optional<Method> parse_method(std::string_view name);

/// Rolling bookkeeping for one window of the stream pipeline: the
/// measurements, the solver starting point, and the residual of that
/// starting point. Invariant: r = A^(index) x_warm - y.
struct WindowState {
  std::size_t index = 0;
  Eigen::VectorXd y;
  Eigen::VectorXd x_warm;
  Eigen::VectorXd r;
};

/// Fresh N(0, sigma^2 I) measurement noise for one window, drawn from a
/// generator seeded by (noise_seed, window). sigma = 0 returns zeros.
Eigen::VectorXd window_noise(Eigen::Index m, double sigma,
                             std::uint64_t noise_seed, std::size_t window);

/// Direct (non-recursive) noiseless measurement of window i:
/// A^(i) [x_i .. x_{i+n-1}] with the offset-i cyclic view.
Eigen::VectorXd sample_window_noiseless(const SensingMatrix& a,
                                        const StreamSource& stream,
                                        std::size_t window);

/// Noisy measurement y^(i) = A^(i) x^(i) + w^(i).
Eigen::VectorXd sample_window(const SensingMatrix& a, const StreamSource& stream,
                              std::size_t window, std::uint64_t noise_seed);

/// Rank-1 measurement update: sliding the window by one swaps stream entry
/// i-1 for entry i-1+n in the same physical column (i-1) mod n, so
/// y^(i) = y^(i-1) + a_{(i-1) mod n} (x_{i-1+n} - x_{i-1}).
/// `prev_y_noiseless` must be the exact noiseless measurement of window i-1.
Eigen::VectorXd sample_window_recursive(const Eigen::VectorXd& prev_y_noiseless,
                                        const SensingMatrix& a,
                                        const StreamSource& stream,
                                        std::size_t window);

/// Warm start for the next window: drop the entry that left the window and
/// append a zero guess for the one that entered.
Eigen::VectorXd warm_start(const Eigen::VectorXd& prev_solution);

/// Residual carry between windows, r_next = r_prev + y_prev - y_new.
/// Exact when the next starting point is the full cyclic rotation of the
/// previous solution; the zero-append warm start additionally subtracts
/// prev[0] times the wrapped column (handled inside decompress_stream).
Eigen::VectorXd residual_update(const Eigen::VectorXd& r_prev,
                                const Eigen::VectorXd& y_prev,
                                const Eigen::VectorXd& y_new);

/// Vote-and-average rule for one stream entry seen by several windows.
struct CombineTuning {
  double support_threshold = 0.0;  // |estimate| > threshold counts as a vote
  double vote_fraction = 0.5;      // flag iff votes > vote_fraction * count
};

/// Combines one entry's window estimates: flag by majority vote on the raw
/// magnitudes, value = mean of the debiased estimates over voting windows
/// (zero when unflagged). The single-list overload uses the same values for
/// voting and averaging.
std::pair<double, bool> combine_estimates(const std::vector<double>& raw,
                                          const std::vector<double>& debiased,
                                          const CombineTuning& tuning);
std::pair<double, bool> combine_estimates(const std::vector<double>& estimates,
                                          const CombineTuning& tuning);

/// Combined per-entry decoding of a stream. Entries covered by no window
/// keep combined = 0, support = false, coverage = 0.
struct StreamEstimate {
  Eigen::VectorXd combined;
  std::vector<std::uint8_t> support;
  std::vector<std::uint32_t> votes;     // windows voting the entry nonzero
  std::vector<std::uint32_t> coverage;  // windows that estimated the entry
};

struct WindowReport {
  std::size_t index = 0;
  std::size_t iterations = 0;
  double time_ms = 0.0;
  double residual_norm = 0.0;
  double support_f1 = -1.0;  // -1 when ground truth is unavailable
  SolveStatus status = SolveStatus::Converged;
  bool cold_start = false;

  bool converged() const { return status == SolveStatus::Converged; }
};

struct DecompressOptions {
  Method solver = Method::Fbn;
  FbnOptions fbn{};
  BaselineOptions baseline{};
  double lambda = 0.0;      // > 0 overrides the 4 sigma sqrt(2 ln n) formula
  double gamma = 0.0;       // > 0 overrides gamma_frac / ||A||^2
  double gamma_frac = 0.95;  // fraction of the 1 / ||A||^2 step bound
  std::uint64_t noise_seed = 0;
  std::size_t max_windows = 0;  // 0 = every full window
  bool recursive_sampling = true;
  bool residual_recursion = true;
  double support_threshold = -1.0;  // < 0 = lambda / 2
  double vote_fraction = 0.5;
  bool debias = true;  // least-squares refit on each window's flagged support

  /// Observer invoked after each window with the report, the full solver
  /// result, and the debiased window estimate. Estimates are not stored
  /// per window otherwise.
  std::function<void(const WindowReport&, const SolverResult&,
                     const Eigen::VectorXd&)>
      on_window;
};

struct StreamDecodeResult {
  StreamEstimate estimate;
  std::vector<WindowReport> windows;
  double lambda = 0.0;
  double gamma = 0.0;
};

/// Full pipeline on a generated stream: recursive sampling with fresh
/// per-window noise, warm-started decompression, residual carry, and
/// per-entry combining. A failed window is reported and the next window
/// cold-starts.
StreamDecodeResult decompress_stream(const StreamSource& stream,
                                     const SensingMatrix& a,
                                     const DecompressOptions& opts = {});

/// Same pipeline driven by pre-recorded measurements (one m-vector per
/// window, window i using the offset-(i mod n) view). No ground truth, so
/// window reports carry support_f1 = -1.
StreamDecodeResult decompress_measurements(const std::vector<Eigen::VectorXd>& ys,
                                           const SensingMatrix& a, double lambda,
                                           const DecompressOptions& opts = {});

/// F1 score of {|estimate| > threshold} against the exact nonzeros of
/// `truth`; 1.0 when both supports are empty.
double support_f1(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth,
                  double threshold);

/// F1 score of the combined support flags against the exact nonzeros.
double support_f1(const StreamEstimate& estimate, const Eigen::VectorXd& truth);

}  // namespace rcslasso
