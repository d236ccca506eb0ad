#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cstdint>
#include <memory>
#include <vector>

namespace rcslasso {

/// Ground-truth sparse stream. Entries are nonzero independently with
/// probability `sparsity`; nonzero magnitudes are uniform in [1,2] times
/// the dynamic-range scale 8*sigma*sqrt(2 ln N) (unit scale when sigma = 0),
/// with random sign. Immutable after construction.
struct StreamSource {
  std::size_t length = 0;   // N
  double sparsity = 0.0;    // S
  double sigma = 0.0;       // noise std used to scale magnitudes
  std::uint64_t seed = 0;
  Eigen::VectorXd values;   // ground truth x_0 .. x_{N-1}

  /// Lower edge of the nonzero magnitude band, 8*sigma*sqrt(2 ln N).
  double magnitude_floor() const;
};

StreamSource generate_stream(std::size_t length, double sparsity, double sigma,
                             std::uint64_t seed);

/// Dense m x n sensing matrix with a cyclic column-offset view: logical
/// column j of the view is physical column (j + offset) mod n, so the view
/// at offset i equals A * P^i without ever materializing the product.
/// The matrix data is shared between views; views are cheap to copy and
/// safe to share across threads.
class SensingMatrix {
 public:
  SensingMatrix() = default;
  explicit SensingMatrix(Eigen::MatrixXd data, std::uint64_t seed = 0);

  Eigen::Index rows() const { return data_ ? data_->rows() : 0; }
  Eigen::Index cols() const { return data_ ? data_->cols() : 0; }
  Eigen::Index offset() const { return offset_; }
  std::uint64_t seed() const { return seed_; }
  const Eigen::MatrixXd& data() const { return *data_; }

  /// View of the same data rotated to column offset `offset` (taken mod n).
  SensingMatrix with_offset(Eigen::Index offset) const;

  /// Physical column index backing logical column j of this view.
  Eigen::Index physical_column(Eigen::Index j) const {
    return (j + offset_) % cols();
  }

  /// Logical column j as a column of the underlying storage.
  Eigen::MatrixXd::ConstColXpr column(Eigen::Index j) const {
    return data_->col(physical_column(j));
  }

  /// y = A^(offset) x, computed as two block products on the physical data.
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;

  /// g = (A^(offset))^T r.
  Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& r) const;

  /// m x k copy of the logical columns listed in `indices` (ascending or not).
  Eigen::MatrixXd gather_columns(const std::vector<Eigen::Index>& indices) const;

  /// Dense copy of the logical (rotated) matrix; intended for small sizes.
  Eigen::MatrixXd materialize() const;

  /// Spectral norm ||A||_2, estimated once per physical matrix by power
  /// iteration (relative tolerance 1e-6, at most 500 iterations). Shared
  /// by all views since column rotation preserves singular values.
  double operator_norm() const { return operator_norm_; }

 private:
  std::shared_ptr<const Eigen::MatrixXd> data_;
  Eigen::Index offset_ = 0;
  std::uint64_t seed_ = 0;
  double operator_norm_ = 0.0;
};

SensingMatrix generate_sensing_matrix(Eigen::Index rows, Eigen::Index cols,
                                      std::uint64_t seed);

/// Power-iteration estimate of the largest singular value.
double operator_norm_estimate(const Eigen::MatrixXd& a,
                              double rel_tolerance = 1e-6,
                              int max_iterations = 500);

/// Per-window problem sizing: s = round(n*S), m = clamp(4s, 1, n),
/// lambda = 4*sigma*sqrt(2 ln n).
struct WindowParams {
  std::size_t support = 0;       // s
  std::size_t measurements = 0;  // m
  double lambda = 0.0;
};

WindowParams window_params(std::size_t n, double sparsity, double sigma);

/// One window's decompression problem. `gamma` must satisfy
/// gamma < 1 / ||A||_2^2.
struct LassoInstance {
  SensingMatrix matrix;
  Eigen::VectorXd y;
  double lambda = 0.0;
  double gamma = 0.0;

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }
};

/// Validating factory. gamma <= 0 requests the default 0.95 / ||A||_2^2;
/// an explicit gamma is rejected unless it is below 1 / ||A||_2^2.
LassoInstance make_lasso_instance(SensingMatrix matrix, Eigen::VectorXd y,
                                  double lambda, double gamma = 0.0);

enum class StepKind : std::uint8_t {
  Newton,        // semismooth Newton step (factorized system)
  ProxFallback,  // forward-backward step taken when the Newton system is
                 // singular or oversized
  Gradient,      // ISTA / FISTA forward-backward step
  Splitting,     // ADMM iteration
};

enum class SolveStatus : std::uint8_t {
  Converged,
  MaxIterations,
  BacktrackLimit,
};

struct IterationRecord {
  double fbe = 0.0;            // merit value at the iterate
  double residual_norm = 0.0;  // ||R_gamma(x)||_2 at the prevailing lambda
  double step_size = 0.0;      // tau (1 for full prox / splitting steps)
  Eigen::Index active_size = 0;
  double lambda_bar = 0.0;     // continuation weight in force for this step
  StepKind kind = StepKind::Newton;
};

struct SolverResult {
  Eigen::VectorXd x_hat;
  std::size_t iterations = 0;
  double residual_norm = 0.0;  // ||R_gamma(x_hat)||_2 at the target lambda
  std::chrono::duration<double, std::milli> elapsed{0.0};
  std::vector<IterationRecord> trace;  // one record per iteration
  SolveStatus status = SolveStatus::Converged;
  Eigen::VectorXd measurement_residual;  // A x_hat - y, reusable downstream

  bool converged() const { return status == SolveStatus::Converged; }
};

}  // namespace rcslasso
