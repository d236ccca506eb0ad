#include "rcslasso/model.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "rcslasso/rng.hpp"

namespace rcslasso {

double StreamSource::magnitude_floor() const {
  if (sigma <= 0.0) return 0.0;
  return 8.0 * sigma * std::sqrt(2.0 * std::log(static_cast<double>(length)));
}

StreamSource generate_stream(std::size_t length, double sparsity, double sigma,
                             std::uint64_t seed) {
  if (length == 0) throw std::invalid_argument("generate_stream: N must be >= 1");
  if (!(sparsity >= 0.0 && sparsity <= 1.0))
    throw std::invalid_argument("generate_stream: S must lie in [0, 1]");
  if (sigma < 0.0) throw std::invalid_argument("generate_stream: sigma must be >= 0");

  StreamSource out;
  out.length = length;
  out.sparsity = sparsity;
  out.sigma = sigma;
  out.seed = seed;
  out.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(length));

  // Magnitudes are uniform in [1,2] scaled by the dynamic-range floor;
  // with sigma = 0 the floor degenerates, so the unit scale is kept to
  // allow noiseless test streams.
  const double scale =
      sigma > 0.0
          ? 8.0 * sigma * std::sqrt(2.0 * std::log(static_cast<double>(length)))
          : 1.0;

  Rng rng(derive_seed(seed, SeedPurpose::Stream));
  for (Eigen::Index i = 0; i < out.values.size(); ++i) {
    if (rng.uniform() < sparsity) {
      const double magnitude = (1.0 + rng.uniform()) * scale;
      out.values[i] = rng.sign() * magnitude;
    }
  }
  return out;
}

SensingMatrix::SensingMatrix(Eigen::MatrixXd data, std::uint64_t seed)
    : data_(std::make_shared<const Eigen::MatrixXd>(std::move(data))),
      offset_(0),
      seed_(seed) {
  if (data_->rows() == 0 || data_->cols() == 0)
    throw std::invalid_argument("SensingMatrix: dimensions must be positive");
  operator_norm_ = operator_norm_estimate(*data_);
}

SensingMatrix SensingMatrix::with_offset(Eigen::Index offset) const {
  SensingMatrix view(*this);
  const Eigen::Index n = cols();
  view.offset_ = ((offset % n) + n) % n;
  return view;
}

Eigen::VectorXd SensingMatrix::multiply(const Eigen::VectorXd& x) const {
  const Eigen::Index n = cols();
  if (x.size() != n) throw std::invalid_argument("SensingMatrix::multiply: size mismatch");
  if (offset_ == 0) return *data_ * x;
  const Eigen::Index head = n - offset_;
  // Logical column j is physical column (j + offset) mod n.
  return data_->middleCols(offset_, head) * x.head(head) +
         data_->leftCols(offset_) * x.tail(offset_);
}

Eigen::VectorXd SensingMatrix::multiply_transpose(const Eigen::VectorXd& r) const {
  const Eigen::Index n = cols();
  if (r.size() != rows())
    throw std::invalid_argument("SensingMatrix::multiply_transpose: size mismatch");
  if (offset_ == 0) return data_->transpose() * r;
  const Eigen::Index head = n - offset_;
  Eigen::VectorXd g(n);
  g.head(head).noalias() = data_->middleCols(offset_, head).transpose() * r;
  g.tail(offset_).noalias() = data_->leftCols(offset_).transpose() * r;
  return g;
}

Eigen::MatrixXd SensingMatrix::gather_columns(
    const std::vector<Eigen::Index>& indices) const {
  Eigen::MatrixXd out(rows(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k)
    out.col(static_cast<Eigen::Index>(k)) = column(indices[k]);
  return out;
}

Eigen::MatrixXd SensingMatrix::materialize() const {
  Eigen::MatrixXd out(rows(), cols());
  for (Eigen::Index j = 0; j < cols(); ++j) out.col(j) = column(j);
  return out;
}

SensingMatrix generate_sensing_matrix(Eigen::Index rows, Eigen::Index cols,
                                      std::uint64_t seed) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("generate_sensing_matrix: dimensions must be >= 1");
  if (rows > cols)
    throw std::invalid_argument("generate_sensing_matrix: m must not exceed n");

  Eigen::MatrixXd data(rows, cols);
  const double std_dev = 1.0 / std::sqrt(static_cast<double>(rows));
  Rng rng(derive_seed(seed, SeedPurpose::Matrix));
  // Column-major fill order is part of the pinned generation recipe.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) data(i, j) = std_dev * rng.normal();
  return SensingMatrix(std::move(data), seed);
}

double operator_norm_estimate(const Eigen::MatrixXd& a, double rel_tolerance,
                              int max_iterations) {
  const Eigen::Index n = a.cols();
  Rng rng(0x9E3779B97F4A7C15ULL);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform() - 0.5;
  double vnorm = v.norm();
  if (vnorm == 0.0) v.setOnes(), vnorm = v.norm();
  v /= vnorm;

  double estimate = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd w = a.transpose() * (a * v);
    const double wnorm = w.norm();
    if (wnorm == 0.0) return 0.0;  // zero matrix
    const double next = std::sqrt(wnorm);
    v = w / wnorm;
    if (it > 0 && std::abs(next - estimate) <= rel_tolerance * next) {
      return next;
    }
    estimate = next;
  }
  return estimate;
}

WindowParams window_params(std::size_t n, double sparsity, double sigma) {
  if (n == 0) throw std::invalid_argument("window_params: n must be >= 1");
  if (!(sparsity >= 0.0 && sparsity <= 1.0))
    throw std::invalid_argument("window_params: S must lie in [0, 1]");
  if (sigma < 0.0) throw std::invalid_argument("window_params: sigma must be >= 0");

  WindowParams out;
  out.support = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * sparsity));
  const std::size_t m_raw = 4 * out.support;
  if (m_raw == 0 && sigma == 0.0)
    throw std::invalid_argument(
        "window_params: empty support with sigma = 0 leaves nothing to sense");
  out.measurements = std::min(std::max<std::size_t>(m_raw, 1), n);
  out.lambda = 4.0 * sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
  return out;
}

LassoInstance make_lasso_instance(SensingMatrix matrix, Eigen::VectorXd y,
                                  double lambda, double gamma) {
  if (y.size() != matrix.rows())
    throw std::invalid_argument("make_lasso_instance: y size must equal m");
  if (!(lambda > 0.0))
    throw std::invalid_argument("make_lasso_instance: lambda must be > 0");

  const double norm = matrix.operator_norm();
  const double limit = norm > 0.0 ? 1.0 / (norm * norm) : 0.0;
  if (gamma <= 0.0) {
    if (limit == 0.0)
      throw std::invalid_argument("make_lasso_instance: zero matrix has no step size");
    gamma = 0.95 * limit;
  } else if (limit > 0.0 && gamma >= limit) {
    throw std::invalid_argument(
        "make_lasso_instance: gamma must be below 1 / ||A||_2^2");
  }

  LassoInstance inst;
  inst.matrix = std::move(matrix);
  inst.y = std::move(y);
  inst.lambda = lambda;
  inst.gamma = gamma;
  return inst;
}

}  // namespace rcslasso
