// rcs: command line front end for the streaming LASSO toolkit.
//
// Subcommands: generate, compress, decompress, bench, solve.
// Exit codes: 0 success, 1 usage/validation error, 2 solver failure.
// A JSON config file (--config) can replace flags; RCS_OUT_DIR prefixes
// relative output paths.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcslasso/bench.hpp"
#include "rcslasso/io.hpp"
#include "rcslasso/prox.hpp"
#include "rcslasso/rcs.hpp"
#include "rcslasso/rng.hpp"

namespace {

using nlohmann::json;

// CLI11 config reader for flat JSON files; top-level objects are
// subcommand sections, e.g. {"bench": {"sweep": "n=500,1000"}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    const json data = json::parse(input);
    if (!data.is_object())
      throw CLI::FileError("config root must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : data.items()) {
      if (value.is_object()) {
        for (const auto& [name, leaf] : value.items())
          items.push_back(make_item({key}, name, leaf));
      } else {
        items.push_back(make_item({}, key, value));
      }
    }
    return items;
  }

 private:
  static CLI::ConfigItem make_item(std::vector<std::string> parents,
                                   const std::string& name, const json& leaf) {
    CLI::ConfigItem item;
    item.parents = std::move(parents);
    item.name = name;
    if (leaf.is_array()) {
      for (const auto& element : leaf) item.inputs.push_back(scalar(element));
    } else {
      item.inputs.push_back(scalar(leaf));
    }
    return item;
  }

  static std::string scalar(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    return value.dump();
  }
};

std::filesystem::path resolve_out(const std::string& out) {
  std::filesystem::path path(out);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("RCS_OUT_DIR"); dir && *dir)
      path = std::filesystem::path(dir) / path;
  }
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  return path;
}

rcslasso::Method require_method(const std::string& name) {
  const auto method = rcslasso::parse_method(name);
  if (!method)
    throw CLI::ValidationError("--method",
                               "unknown method '" + name +
                                   "' (expected fbn, ista, fista, or admm)");
  return *method;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  if (const auto range = text.find(".."); range != std::string::npos) {
    const auto lo = std::stoull(text.substr(0, range));
    const auto hi = std::stoull(text.substr(range + 2));
    if (hi < lo) throw CLI::ValidationError("--seeds", "range is reversed");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  for (const auto& part : split_list(text, ',')) seeds.push_back(std::stoull(part));
  return seeds;
}

struct SweepAxis {
  std::vector<Eigen::Index> window_sizes;
  std::vector<double> sparsities;
};

SweepAxis parse_sweep(const std::string& text, Eigen::Index fixed_n,
                      double fixed_sparsity) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw CLI::ValidationError("--sweep", "expected axis=v1,v2,... ");
  const std::string axis = text.substr(0, eq);
  const auto values = split_list(text.substr(eq + 1), ',');
  if (values.empty() || values.front().empty())
    throw CLI::ValidationError("--sweep", "no values given");

  SweepAxis sweep;
  if (axis == "n") {
    for (const auto& v : values)
      sweep.window_sizes.push_back(static_cast<Eigen::Index>(std::stoll(v)));
    sweep.sparsities = {fixed_sparsity};
  } else if (axis == "s" || axis == "S" || axis == "sparsity") {
    for (const auto& v : values) sweep.sparsities.push_back(std::stod(v));
    sweep.window_sizes = {fixed_n};
  } else {
    throw CLI::ValidationError("--sweep", "axis must be n or s");
  }
  return sweep;
}

// ---- subcommand bodies (return process exit code) ----

struct GenerateArgs {
  std::size_t length = 0;
  double sparsity = 0.1;
  double sigma = 0.1;
  std::uint64_t seed = 1;
  std::string out;
};

int run_generate(const GenerateArgs& args) {
  const auto stream = rcslasso::generate_stream(
      args.length, args.sparsity, args.sigma,
      rcslasso::derive_seed(args.seed, rcslasso::SeedPurpose::Stream, 0));
  const auto path = resolve_out(args.out);
  rcslasso::write_stream(path, stream);
  std::cout << "wrote " << stream.length << " samples to " << path.string()
            << '\n';
  return 0;
}

struct CompressArgs {
  std::string in;
  Eigen::Index window = 0;
  std::optional<std::uint64_t> seed;
  double lambda = 0.0;
  double gamma_frac = 0.95;
  std::size_t max_windows = 0;
  std::string out;
};

int run_compress(const CompressArgs& args) {
  namespace rl = rcslasso;
  const auto stream = rl::read_stream(args.in);
  const auto n = static_cast<std::size_t>(args.window);
  if (stream.length < n)
    throw std::invalid_argument("stream is shorter than the window size");

  const auto params = rl::window_params(n, stream.sparsity, stream.sigma);
  const double lambda = args.lambda > 0.0 ? args.lambda : params.lambda;
  if (!(lambda > 0.0))
    throw std::invalid_argument(
        "lambda is zero for this stream (sigma = 0); pass --lambda");
  const std::uint64_t master = args.seed.value_or(stream.seed);
  const std::uint64_t matrix_seed =
      rl::derive_seed(master, rl::SeedPurpose::Matrix, 0);
  const auto matrix = rl::generate_sensing_matrix(
      static_cast<Eigen::Index>(params.measurements), args.window, matrix_seed);

  rl::MeasurementDump dump;
  dump.n = args.window;
  dump.m = matrix.rows();
  dump.lambda = lambda;
  dump.gamma =
      args.gamma_frac / (matrix.operator_norm() * matrix.operator_norm());
  dump.seed = matrix_seed;

  const std::size_t total = stream.length - n + 1;
  const std::size_t count =
      args.max_windows > 0 ? std::min(args.max_windows, total) : total;
  dump.windows.reserve(count);
  Eigen::VectorXd clean;
  for (std::size_t i = 0; i < count; ++i) {
    clean = i == 0 ? rl::sample_window_noiseless(matrix, stream, 0)
                   : rl::sample_window_recursive(clean, matrix, stream, i);
    dump.windows.push_back(
        clean + rl::window_noise(matrix.rows(), stream.sigma, master, i));
  }

  const auto path = resolve_out(args.out);
  rl::write_measurements(path, dump);
  std::cout << "wrote " << dump.windows.size() << " windows (m=" << dump.m
            << ", lambda=" << lambda << ") to " << path.string() << '\n';
  return 0;
}

struct DecompressArgs {
  std::string in;
  std::string method = "fbn";
  double tol = 1e-8;
  double eta = 0.5;
  std::size_t max_windows = 0;
  std::string out;
  std::string trace;
};

int run_decompress(const DecompressArgs& args) {
  namespace rl = rcslasso;
  const auto dump = rl::read_measurements(args.in);
  const auto matrix = rl::generate_sensing_matrix(dump.m, dump.n, dump.seed);

  rl::DecompressOptions opts;
  opts.solver = require_method(args.method);
  opts.fbn.tolerance = args.tol;
  opts.fbn.eta = args.eta;
  opts.baseline.tolerance = args.tol;
  opts.gamma = dump.gamma;
  opts.max_windows = args.max_windows;
  const auto run =
      rl::decompress_measurements(dump.windows, matrix, dump.lambda, opts);

  rl::StreamSource estimate;
  estimate.length = static_cast<std::size_t>(run.estimate.combined.size());
  estimate.seed = dump.seed;
  estimate.values = run.estimate.combined;
  const auto out_path = resolve_out(args.out);
  rl::write_stream(out_path, estimate);

  bool all_converged = true;
  if (!args.trace.empty()) {
    std::vector<rl::BenchmarkRecord> rows;
    for (const auto& w : run.windows) {
      rl::BenchmarkRecord rec;
      rec.method = opts.solver;
      rec.n = dump.n;
      rec.m = dump.m;
      rec.lambda = run.lambda;
      rec.window = static_cast<std::int64_t>(w.index);
      rec.iterations = w.iterations;
      rec.time_ms = w.time_ms;
      rec.residual_norm = w.residual_norm;
      rec.support_f1 = w.support_f1;
      rec.seed = dump.seed;
      rec.converged = w.converged();
      rows.push_back(rec);
    }
    rl::write_benchmark_csv(resolve_out(args.trace), rows);
  }
  for (const auto& w : run.windows) all_converged = all_converged && w.converged();

  std::cout << "decoded " << run.windows.size() << " windows to "
            << out_path.string() << '\n';
  if (!all_converged) {
    std::cerr << "warning: some windows did not converge\n";
    return 2;
  }
  return 0;
}

struct BenchArgs {
  std::string sweep = "n=500,1000,2000";
  std::string methods;
  std::string seeds = "1";
  Eigen::Index window = 1000;
  double sparsity = 0.1;
  double sigma = 0.1;
  double tol = 1e-8;
  double eta = 0.5;
  double lambda = 0.0;
  double gamma_frac = 0.95;
  std::size_t length = 100000;
  std::size_t max_windows = 200;
  bool aggregate_only = false;
  std::string out;
};

int run_bench(const BenchArgs& args) {
  namespace rl = rcslasso;
  rl::BenchmarkConfig config;
  const SweepAxis sweep = parse_sweep(args.sweep, args.window, args.sparsity);
  config.window_sizes = sweep.window_sizes;
  config.sparsities = sweep.sparsities;
  for (const auto& name : split_list(args.methods, ','))
    if (!name.empty()) config.methods.push_back(require_method(name));
  config.seeds = parse_seed_list(args.seeds);
  config.stream_length = args.length;
  config.sigma = args.sigma;
  config.tolerance = args.tol;
  config.eta = args.eta;
  config.lambda = args.lambda;
  config.gamma_frac = args.gamma_frac;
  config.max_windows = args.max_windows;
  config.emit_window_rows = !args.aggregate_only;

  const auto records = rl::run_benchmark(config);
  const auto path = resolve_out(args.out);
  rl::write_benchmark_csv(path, records);
  std::cout << "wrote " << records.size() << " rows to " << path.string()
            << '\n';
  return 0;
}

struct SolveArgs {
  std::string in;
  std::string method = "fbn";
  double tol = 1e-8;
  double eta = 0.5;
  double gamma_frac = 0.95;
};

int run_solve(const SolveArgs& args) {
  namespace rl = rcslasso;
  std::ifstream in(args.in);
  if (!in) throw std::runtime_error("cannot open instance file: " + args.in);
  const json spec = json::parse(in);

  const auto rows_json = spec.at("a");
  if (!rows_json.is_array() || rows_json.empty())
    throw std::invalid_argument("instance field 'a' must be a non-empty array");
  const auto m = static_cast<Eigen::Index>(rows_json.size());
  const auto n = static_cast<Eigen::Index>(rows_json.at(0).size());
  Eigen::MatrixXd a(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& row = rows_json.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != n)
      throw std::invalid_argument("instance matrix rows have unequal lengths");
    for (Eigen::Index j = 0; j < n; ++j)
      a(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
  }
  const auto y_json = spec.at("y");
  if (static_cast<Eigen::Index>(y_json.size()) != m)
    throw std::invalid_argument("instance field 'y' must have one entry per row");
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i)
    y[i] = y_json.at(static_cast<std::size_t>(i)).get<double>();

  const double lambda = spec.at("lambda").get<double>();
  const rl::SensingMatrix matrix{a};
  double gamma = spec.value("gamma", 0.0);
  if (gamma <= 0.0)
    gamma =
        args.gamma_frac / (matrix.operator_norm() * matrix.operator_norm());
  const auto inst = rl::make_lasso_instance(matrix, y, lambda, gamma);

  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  rl::SolverResult res;
  switch (require_method(args.method)) {
    case rl::Method::Fbn: {
      rl::FbnOptions opts;
      opts.tolerance = args.tol;
      opts.eta = args.eta;
      res = rl::solve_lasso_fbn(inst, x0, opts);
      break;
    }
    case rl::Method::Ista: {
      rl::BaselineOptions opts;
      opts.tolerance = args.tol;
      res = rl::solve_lasso_ista(inst, x0, opts);
      break;
    }
    case rl::Method::Fista: {
      rl::BaselineOptions opts;
      opts.tolerance = args.tol;
      res = rl::solve_lasso_fista(inst, x0, opts);
      break;
    }
    case rl::Method::Admm: {
      rl::BaselineOptions opts;
      opts.tolerance = args.tol;
      res = rl::solve_lasso_admm(inst, x0, opts);
      break;
    }
  }

  std::cout << "x_hat: [";
  for (Eigen::Index i = 0; i < res.x_hat.size(); ++i) {
    if (i > 0) std::cout << ", ";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", res.x_hat[i]);
    std::cout << buf;
  }
  std::cout << "]\n";
  std::cout << "iterations: " << res.iterations << '\n';
  std::cout << "residual_norm: " << res.residual_norm << '\n';
  std::cout << "converged: " << (res.converged() ? "true" : "false") << '\n';
  return res.converged() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming compressed sensing LASSO toolkit"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file replacing flags");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Generate a sparse stream file");
  gen_cmd->add_option("--n", gen.length, "Stream length N")->required();
  gen_cmd->add_option("--sparsity", gen.sparsity, "Nonzero probability S")
                      ->capture_default_str();
  gen_cmd->add_option("--sigma", gen.sigma, "Noise standard deviation")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Stream seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output stream file")->required();

  CompressArgs comp;
  auto* comp_cmd =
      app.add_subcommand("compress", "Sample a stream into window measurements");
  comp_cmd->add_option("--in", comp.in, "Input stream file")->required();
  comp_cmd->add_option("--n", comp.window, "Window size n")->required();
  comp_cmd->add_option("--seed", comp.seed,
                       "Master seed for matrix and noise (default: stream seed)");
  comp_cmd->add_option("--lambda", comp.lambda,
                       "Override the 4 sigma sqrt(2 ln n) weight");
  comp_cmd->add_option("--gamma-frac", comp.gamma_frac,
                       "Step parameter as a fraction of 1/||A||^2")->capture_default_str();
  comp_cmd->add_option("--max-windows", comp.max_windows,
                       "Limit the number of windows (0 = all)")->capture_default_str();
  comp_cmd->add_option("--out", comp.out, "Output measurement file")->required();

  DecompressArgs dec;
  auto* dec_cmd =
      app.add_subcommand("decompress", "Decode window measurements to estimates");
  dec_cmd->add_option("--in", dec.in, "Input measurement file")->required();
  dec_cmd->add_option("--method", dec.method, "fbn | ista | fista | admm")->capture_default_str();
  dec_cmd->add_option("--tol", dec.tol, "Fixed-point residual tolerance")->capture_default_str();
  dec_cmd->add_option("--eta", dec.eta, "Continuation decrease factor")->capture_default_str();
  dec_cmd->add_option("--max-windows", dec.max_windows,
                      "Limit the number of windows (0 = all)")->capture_default_str();
  dec_cmd->add_option("--out", dec.out, "Output estimate file")->required();
  dec_cmd->add_option("--trace", dec.trace, "Per-window trace CSV path");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark sweep to CSV");
  bench_cmd->add_option("--sweep", bench.sweep,
                        "Sweep axis, n=v1,v2,... or s=v1,v2,...")->capture_default_str();
  bench_cmd->add_option("--methods", bench.methods, "Comma list of methods")
      ->required();
  bench_cmd->add_option("--seeds", bench.seeds, "Comma list or a..b range")
                        ->capture_default_str();
  bench_cmd->add_option("--n", bench.window,
                        "Window size when sweeping sparsity")->capture_default_str();
  bench_cmd->add_option("--sparsity", bench.sparsity,
                        "Sparsity when sweeping window size")->capture_default_str();
  bench_cmd->add_option("--sigma", bench.sigma, "Noise standard deviation")
                        ->capture_default_str();
  bench_cmd->add_option("--tol", bench.tol, "Solver tolerance")->capture_default_str();
  bench_cmd->add_option("--eta", bench.eta, "Continuation decrease factor")
                        ->capture_default_str();
  bench_cmd->add_option("--lambda", bench.lambda,
                        "Override the per-size lambda formula");
  bench_cmd->add_option("--gamma-frac", bench.gamma_frac,
                        "Step parameter as a fraction of 1/||A||^2")->capture_default_str();
  bench_cmd->add_option("--length", bench.length, "Stream length N")->capture_default_str();
  bench_cmd->add_option("--max-windows", bench.max_windows,
                        "Windows decoded per run (0 = all)")->capture_default_str();
  bench_cmd->add_flag("--aggregate-only", bench.aggregate_only,
                      "Emit only the aggregate rows");
  bench_cmd->add_option("--out", bench.out, "Output CSV path")->required();

  SolveArgs solve;
  auto* solve_cmd =
      app.add_subcommand("solve", "Solve one LASSO instance from a JSON file");
  solve_cmd->add_option("--in", solve.in, "Instance JSON {a, y, lambda[, gamma]}")
      ->required();
  solve_cmd->add_option("--method", solve.method, "fbn | ista | fista | admm")
                        ->capture_default_str();
  solve_cmd->add_option("--tol", solve.tol, "Fixed-point residual tolerance")
                        ->capture_default_str();
  solve_cmd->add_option("--eta", solve.eta, "Continuation decrease factor")
                        ->capture_default_str();
  solve_cmd->add_option("--gamma-frac", solve.gamma_frac,
                        "Step parameter as a fraction of 1/||A||^2")->capture_default_str();

  int exit_code = 0;
  gen_cmd->callback([&]() { exit_code = run_generate(gen); });
  comp_cmd->callback([&]() { exit_code = run_compress(comp); });
  dec_cmd->callback([&]() { exit_code = run_decompress(dec); });
  bench_cmd->callback([&]() { exit_code = run_bench(bench); });
  solve_cmd->callback([&]() { exit_code = run_solve(solve); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}
