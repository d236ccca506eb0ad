#include "rcslasso/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rcslasso/rng.hpp"

namespace rcslasso {

namespace {

void validate_config(const BenchmarkConfig& config) {
  if (config.methods.empty())
    throw std::invalid_argument("benchmark config: method list is empty");
  if (config.window_sizes.empty())
    throw std::invalid_argument("benchmark config: no window sizes");
  if (config.sparsities.empty())
    throw std::invalid_argument("benchmark config: no sparsity values");
  if (config.seeds.empty())
    throw std::invalid_argument("benchmark config: no seeds");
  if (!(config.tolerance > 0.0))
    throw std::invalid_argument("benchmark config: tolerance must be > 0");
  if (!(config.gamma_frac > 0.0 && config.gamma_frac < 1.0))
    throw std::invalid_argument("benchmark config: gamma_frac must lie in (0,1)");
  for (const auto n : config.window_sizes)
    if (n <= 0 || static_cast<std::size_t>(n) > config.stream_length)
      throw std::invalid_argument(
          "benchmark config: window size must be in [1, stream_length]");
  for (const auto s : config.sparsities)
    if (!(s >= 0.0 && s <= 1.0))
      throw std::invalid_argument("benchmark config: sparsity must be in [0,1]");
}

double median(std::vector<double> values) {
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

double mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

void append_run_records(std::vector<BenchmarkRecord>& records,
                        const BenchmarkRecord& base,
                        const StreamDecodeResult& run, bool emit_window_rows) {
  bool all_converged = true;
  for (const auto& w : run.windows) {
    if (emit_window_rows) {
      BenchmarkRecord rec = base;
      rec.window = static_cast<std::int64_t>(w.index);
      rec.iterations = w.iterations;
      rec.time_ms = w.time_ms;
      rec.residual_norm = w.residual_norm;
      rec.support_f1 = w.support_f1;
      rec.converged = w.converged();
      records.push_back(rec);
    }
    all_converged = all_converged && w.converged();
  }

  // Aggregates exclude the cold first window when anything else exists.
  const std::size_t first = run.windows.size() > 1 ? 1 : 0;
  std::vector<double> iters, times, residuals, f1s;
  for (std::size_t i = first; i < run.windows.size(); ++i) {
    const auto& w = run.windows[i];
    iters.push_back(static_cast<double>(w.iterations));
    times.push_back(w.time_ms);
    residuals.push_back(w.residual_norm);
    f1s.push_back(w.support_f1);
  }

  BenchmarkRecord agg = base;
  agg.converged = all_converged;

  agg.window = -1;
  agg.iterations = static_cast<std::size_t>(std::llround(median(iters)));
  agg.time_ms = median(times);
  agg.residual_norm = median(residuals);
  agg.support_f1 = median(f1s);
  records.push_back(agg);

  agg.window = -2;
  agg.iterations = static_cast<std::size_t>(std::llround(mean(iters)));
  agg.time_ms = mean(times);
  agg.residual_norm = mean(residuals);
  agg.support_f1 = mean(f1s);
  records.push_back(agg);
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

std::vector<BenchmarkRecord> run_benchmark(const BenchmarkConfig& config) {
  validate_config(config);
  std::vector<BenchmarkRecord> records;

  for (const auto n : config.window_sizes) {
    for (const auto sparsity : config.sparsities) {
      const WindowParams params =
          window_params(static_cast<std::size_t>(n), sparsity, config.sigma);
      for (const auto seed : config.seeds) {
        const StreamSource stream =
            generate_stream(config.stream_length, sparsity, config.sigma,
                            derive_seed(seed, SeedPurpose::Stream, 0));
        const SensingMatrix matrix = generate_sensing_matrix(
            static_cast<Eigen::Index>(params.measurements), n,
            derive_seed(seed, SeedPurpose::Matrix, 0));

        for (const auto method : config.methods) {
          DecompressOptions opts;
          opts.solver = method;
          opts.fbn.tolerance = config.tolerance;
          opts.fbn.eta = config.eta;
          opts.baseline.tolerance = config.tolerance;
          opts.lambda = config.lambda;
          opts.gamma_frac = config.gamma_frac;
          opts.noise_seed = seed;
          opts.max_windows = config.max_windows;

          const StreamDecodeResult run = decompress_stream(stream, matrix, opts);

          BenchmarkRecord base;
          base.method = method;
          base.n = n;
          base.m = matrix.rows();
          base.s = params.support;
          base.sparsity = sparsity;
          base.sigma = config.sigma;
          base.lambda = run.lambda;
          base.seed = seed;
          append_run_records(records, base, run, config.emit_window_rows);
        }
      }
    }
  }
  return records;
}

void write_benchmark_csv(std::ostream& out,
                         const std::vector<BenchmarkRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& rec : records) {
    out << method_name(rec.method) << ',' << rec.n << ',' << rec.m << ','
        << rec.s << ',' << format_double(rec.sparsity) << ','
        << format_double(rec.sigma) << ',' << format_double(rec.lambda) << ','
        << rec.window << ',' << rec.iterations << ','
        << format_double(rec.time_ms) << ',' << format_double(rec.residual_norm)
        << ',' << format_double(rec.support_f1) << ',' << rec.seed << ','
        << (rec.converged ? "true" : "false") << '\n';
  }
}

void write_benchmark_csv(const std::filesystem::path& path,
                         const std::vector<BenchmarkRecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  write_benchmark_csv(out, records);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<BenchmarkRecord> read_benchmark_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::runtime_error("benchmark CSV: bad or missing header");

  std::vector<BenchmarkRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 14)
      throw std::runtime_error("benchmark CSV: wrong field count in: " + line);
    const auto method = parse_method(fields[0]);
    if (!method)
      throw std::runtime_error("benchmark CSV: unknown method: " + fields[0]);
    if (fields[13] != "true" && fields[13] != "false")
      throw std::runtime_error("benchmark CSV: bad converged flag: " + line);

    BenchmarkRecord rec;
    rec.method = *method;
    rec.n = static_cast<Eigen::Index>(std::stoll(fields[1]));
    rec.m = static_cast<Eigen::Index>(std::stoll(fields[2]));
    rec.s = std::stoull(fields[3]);
    rec.sparsity = std::stod(fields[4]);
    rec.sigma = std::stod(fields[5]);
    rec.lambda = std::stod(fields[6]);
    rec.window = std::stoll(fields[7]);
    rec.iterations = std::stoull(fields[8]);
    rec.time_ms = std::stod(fields[9]);
    rec.residual_norm = std::stod(fields[10]);
    rec.support_f1 = std::stod(fields[11]);
    rec.seed = std::stoull(fields[12]);
    rec.converged = fields[13] == "true";
    records.push_back(rec);
  }
  return records;
}

}  // namespace rcslasso
