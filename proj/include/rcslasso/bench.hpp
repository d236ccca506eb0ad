#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "rcslasso/rcs.hpp"

namespace rcslasso {

inline constexpr std::string_view kCsvHeader =
    "method,n,m,s,sparsity,sigma,lambda,window,iterations,time_ms,"
    "residual_norm,support_f1,seed,converged";

/// One CSV row. window >= 0 is a per-window row. window = -1 carries the
/// median and window = -2 the mean over the run's timed windows; the first
/// window is excluded from both as cold-start warm-up whenever the run has
/// more than one window. Aggregate rows are converged only if every window
/// of the run converged.
struct BenchmarkRecord {
  Method method = Method::Fbn;
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  std::size_t s = 0;
  double sparsity = 0.0;
  double sigma = 0.0;
  double lambda = 0.0;
  std::int64_t window = 0;
  std::size_t iterations = 0;
  double time_ms = 0.0;
  double residual_norm = 0.0;
  double support_f1 = -1.0;
  std::uint64_t seed = 0;
  bool converged = false;
};

/// Sweep grid: every (window size x sparsity x method x seed) combination
/// runs the streaming pipeline on a fresh seeded stream. Methods share the
/// stream and sensing matrix at equal (n, S, seed). Runs are sequential so
/// wall-clock rows never share cores.
struct BenchmarkConfig {
  std::vector<Eigen::Index> window_sizes{500};
  std::vector<double> sparsities{0.1};
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds{1};
  std::size_t stream_length = 100000;  // N
  double sigma = 0.1;
  double tolerance = 1e-8;
  double eta = 0.5;          // continuation decrease (FBN)
  double lambda = 0.0;       // 0 = 4 sigma sqrt(2 ln n) per window size
  double gamma_frac = 0.95;  // step parameter as a fraction of 1 / ||A||^2
  std::size_t max_windows = 200;  // windows decoded per run; 0 = all
  bool emit_window_rows = true;   // false = aggregate rows only
};

std::vector<BenchmarkRecord> run_benchmark(const BenchmarkConfig& config);

void write_benchmark_csv(std::ostream& out,
                         const std::vector<BenchmarkRecord>& records);
void write_benchmark_csv(const std::filesystem::path& path,
                         const std::vector<BenchmarkRecord>& records);

/// Strict parser for the exact schema above; validates the header line.
std::vector<BenchmarkRecord> read_benchmark_csv(std::istream& in);

}  // namespace rcslasso
