// Python bindings for the streaming LASSO toolkit.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <string>

#include "rcslasso/baselines.hpp"
#include "rcslasso/bench.hpp"
#include "rcslasso/fbn.hpp"
#include "rcslasso/model.hpp"
#include "rcslasso/prox.hpp"
#include "rcslasso/rcs.hpp"
#include "rcslasso/rng.hpp"

namespace py = pybind11;

namespace {

rcslasso::Method method_from_name(const std::string& name) {
  const auto method = rcslasso::parse_method(name);
  if (!method)
    throw std::invalid_argument("unknown method '" + name +
                                "' (expected fbn, ista, fista, or admm)");
  return *method;
}

py::dict result_to_dict(const rcslasso::SolverResult& res) {
  py::dict out;
  out["x_hat"] = res.x_hat;
  out["iterations"] = res.iterations;
  out["residual_norm"] = res.residual_norm;
  out["time_ms"] = res.elapsed.count();
  out["converged"] = res.converged();
  return out;
}

py::dict solve_lasso(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                     double lambda, const std::string& method, double tol,
                     double gamma, double eta,
                     std::optional<Eigen::VectorXd> x0) {
  const rcslasso::SensingMatrix matrix{a};
  if (gamma <= 0.0)
    gamma = 0.95 / (matrix.operator_norm() * matrix.operator_norm());
  const auto inst = rcslasso::make_lasso_instance(matrix, y, lambda, gamma);
  const Eigen::VectorXd start =
      x0 ? *x0 : Eigen::VectorXd::Zero(a.cols()).eval();
  if (start.size() != a.cols())
    throw std::invalid_argument("x0 length does not match the column count");

  rcslasso::SolverResult res;
  switch (method_from_name(method)) {
    case rcslasso::Method::Fbn: {
      rcslasso::FbnOptions opts;
      opts.tolerance = tol;
      opts.eta = eta;
      res = rcslasso::solve_lasso_fbn(inst, start, opts);
      break;
    }
    case rcslasso::Method::Ista: {
      rcslasso::BaselineOptions opts;
      opts.tolerance = tol;
      res = rcslasso::solve_lasso_ista(inst, start, opts);
      break;
    }
    case rcslasso::Method::Fista: {
      rcslasso::BaselineOptions opts;
      opts.tolerance = tol;
      res = rcslasso::solve_lasso_fista(inst, start, opts);
      break;
    }
    case rcslasso::Method::Admm: {
      rcslasso::BaselineOptions opts;
      opts.tolerance = tol;
      res = rcslasso::solve_lasso_admm(inst, start, opts);
      break;
    }
  }
  return result_to_dict(res);
}

py::dict decompress(const Eigen::VectorXd& values, double sparsity, double sigma,
                    Eigen::Index window, const std::string& method, double tol,
                    std::uint64_t seed, std::size_t max_windows) {
  namespace rl = rcslasso;
  rl::StreamSource stream;
  stream.length = static_cast<std::size_t>(values.size());
  stream.sparsity = sparsity;
  stream.sigma = sigma;
  stream.seed = seed;
  stream.values = values;

  const auto params =
      rl::window_params(static_cast<std::size_t>(window), sparsity, sigma);
  const auto matrix = rl::generate_sensing_matrix(
      static_cast<Eigen::Index>(params.measurements), window,
      rl::derive_seed(seed, rl::SeedPurpose::Matrix, 0));

  rl::DecompressOptions opts;
  opts.solver = method_from_name(method);
  opts.fbn.tolerance = tol;
  opts.baseline.tolerance = tol;
  opts.noise_seed = seed;
  opts.max_windows = max_windows;
  const auto run = rl::decompress_stream(stream, matrix, opts);

  py::dict out;
  out["combined"] = run.estimate.combined;
  out["support"] = run.estimate.support;
  out["lambda"] = run.lambda;
  out["gamma"] = run.gamma;
  out["windows"] = run.windows.size();
  out["support_f1"] = rl::support_f1(run.estimate, values);
  bool all = true;
  std::size_t iterations = 0;
  for (const auto& w : run.windows) {
    all = all && w.converged();
    iterations += w.iterations;
  }
  out["converged"] = all;
  out["total_iterations"] = iterations;
  return out;
}

}  // namespace

PYBIND11_MODULE(rcslasso, m) {
  m.doc() = "Streaming compressed sensing LASSO toolkit";

  m.def("soft_threshold",
        py::overload_cast<const Eigen::VectorXd&, double>(
            &rcslasso::soft_threshold),
        py::arg("v"), py::arg("threshold"),
        "Elementwise soft-thresholding shrink operator.");

  m.def(
      "window_params",
      [](std::size_t n, double sparsity, double sigma) {
        const auto params = rcslasso::window_params(n, sparsity, sigma);
        py::dict out;
        out["s"] = params.support;
        out["m"] = params.measurements;
        out["lambda"] = params.lambda;
        return out;
      },
      py::arg("n"), py::arg("sparsity"), py::arg("sigma"),
      "Per-window sizing: s = round(n S), m = clamp(4 s, 1, n), "
      "lambda = 4 sigma sqrt(2 ln n).");

  m.def(
      "generate_stream",
      [](std::size_t length, double sparsity, double sigma,
         std::uint64_t seed) {
        return rcslasso::generate_stream(length, sparsity, sigma, seed).values;
      },
      py::arg("length"), py::arg("sparsity"), py::arg("sigma"),
      py::arg("seed"),
      "Seeded sparse stream: Bernoulli(S) support with signed magnitudes.");

  m.def(
      "generate_sensing_matrix",
      [](Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
        return rcslasso::generate_sensing_matrix(rows, cols, seed).data();
      },
      py::arg("rows"), py::arg("cols"), py::arg("seed"),
      "Seeded N(0, 1/m) Gaussian sensing matrix.");

  m.def("solve_lasso", &solve_lasso, py::arg("a"), py::arg("y"),
        py::arg("lambda_"), py::arg("method") = "fbn", py::arg("tol") = 1e-8,
        py::arg("gamma") = 0.0, py::arg("eta") = 0.5,
        py::arg("x0") = std::nullopt,
        "Solve min 0.5 ||A x - y||^2 + lambda ||x||_1; returns a dict with "
        "x_hat, iterations, residual_norm, time_ms, converged.");

  m.def("decompress", &decompress, py::arg("values"), py::arg("sparsity"),
        py::arg("sigma"), py::arg("window"), py::arg("method") = "fbn",
        py::arg("tol") = 1e-8, py::arg("seed") = 1,
        py::arg("max_windows") = 0,
        "Run the full sliding-window pipeline on a ground-truth stream; "
        "returns the combined estimate, support flags, and run stats.");
}
