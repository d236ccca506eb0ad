#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rcslasso/model.hpp"
#include "rcslasso/rng.hpp"

using namespace rcslasso;

TEST_SUITE("model") {

TEST_CASE("stream generation is deterministic per seed") {
  const auto a = generate_stream(400, 0.1, 0.1, 7);
  const auto b = generate_stream(400, 0.1, 0.1, 7);
  const auto c = generate_stream(400, 0.1, 0.1, 8);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  CHECK(a.length == 400);
  CHECK(a.values.size() == 400);
}

TEST_CASE("stream sparsity matches the Bernoulli rate") {
  const auto stream = generate_stream(20000, 0.1, 0.1, 3);
  const auto nonzeros = (stream.values.array() != 0.0).count();
  // Binomial(20000, 0.1): mean 2000, std ~42; allow 6 sigma.
  CHECK(nonzeros > 1750);
  CHECK(nonzeros < 2250);
}

TEST_CASE("nonzero magnitudes stay in the dynamic-range band") {
  const std::size_t length = 5000;
  const double sigma = 0.1;
  const double low = 8.0 * sigma * std::sqrt(2.0 * std::log(double(length)));
  const auto stream = generate_stream(length, 0.08, sigma, 11);
  for (Eigen::Index i = 0; i < stream.values.size(); ++i) {
    const double v = stream.values[i];
    if (v == 0.0) continue;
    CHECK(std::abs(v) >= low);
    CHECK(std::abs(v) <= 2.0 * low);
  }
}

TEST_CASE("noiseless streams fall back to the unit magnitude band") {
  const auto stream = generate_stream(3000, 0.1, 0.0, 5);
  for (Eigen::Index i = 0; i < stream.values.size(); ++i) {
    const double v = stream.values[i];
    if (v == 0.0) continue;
    CHECK(std::abs(v) >= 1.0);
    CHECK(std::abs(v) <= 2.0);
  }
}

TEST_CASE("window sizing follows s = round(nS), m = clamp(4s, 1, n)") {
  const auto p = window_params(500, 0.1, 0.1);
  CHECK(p.support == 50);
  CHECK(p.measurements == 200);
  CHECK(p.lambda == doctest::Approx(0.4 * std::sqrt(2.0 * std::log(500.0)))
                        .epsilon(1e-15));

  CHECK(window_params(500, 0.0, 0.1).measurements == 1);  // clamp from below
  CHECK(window_params(10, 0.9, 0.1).measurements == 10);  // clamp at n
  CHECK(window_params(500, 0.1, 0.0).lambda == 0.0);
}

TEST_CASE("sensing matrix entries look N(0, 1/m)") {
  const auto a = generate_sensing_matrix(200, 400, 9);
  const auto& d = a.data();
  const double mean = d.mean();
  const double var = (d.array() - mean).square().mean();
  CHECK(std::abs(mean) < 3.0 / std::sqrt(200.0 * 400.0));  // 3 sigma
  CHECK(var == doctest::Approx(1.0 / 200.0).epsilon(0.05));
  CHECK(generate_sensing_matrix(200, 400, 9).data() == d);
}

TEST_CASE("offset views index the cyclic column rotation") {
  const auto a = generate_sensing_matrix(6, 11, 2);
  const auto view = a.with_offset(4);
  CHECK(view.offset() == 4);
  for (Eigen::Index j = 0; j < 11; ++j) {
    CHECK(view.physical_column(j) == (j + 4) % 11);
    CHECK(view.column(j) == a.data().col((j + 4) % 11));
  }
  // offsets are absolute and reduced mod n
  CHECK(a.with_offset(11 + 4).physical_column(0) == 4);
}

TEST_CASE("offset view at n is the identity rotation") {
  const auto a = generate_sensing_matrix(5, 9, 6);
  const auto full_turn = a.with_offset(9);
  CHECK((full_turn.materialize().array() == a.materialize().array()).all());
  CHECK((a.materialize().array() == a.data().array()).all());
}

TEST_CASE("rotated multiply agrees with the materialized product") {
  const auto a = generate_sensing_matrix(7, 13, 4);
  Rng rng(77);
  Eigen::VectorXd x(13);
  Eigen::VectorXd r(7);
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
  for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = rng.normal();
  for (Eigen::Index off : {0, 1, 5, 12}) {
    const auto view = a.with_offset(off);
    const Eigen::MatrixXd dense = view.materialize();
    CHECK((view.multiply(x) - dense * x).lpNorm<Eigen::Infinity>() < 1e-14);
    CHECK((view.multiply_transpose(r) - dense.transpose() * r)
              .lpNorm<Eigen::Infinity>() < 1e-14);
  }
}

TEST_CASE("gather_columns copies the requested logical columns") {
  const auto a = generate_sensing_matrix(4, 7, 8);
  const auto view = a.with_offset(3);
  const std::vector<Eigen::Index> idx{6, 0, 2};
  const Eigen::MatrixXd g = view.gather_columns(idx);
  REQUIRE(g.cols() == 3);
  for (int k = 0; k < 3; ++k)
    CHECK(g.col(k) == a.data().col((idx[size_t(k)] + 3) % 7));
}

TEST_CASE("operator norm matches the largest singular value") {
  const auto a = generate_sensing_matrix(30, 60, 12);
  const double svd_norm =
      Eigen::JacobiSVD<Eigen::MatrixXd>(a.data()).singularValues()[0];
  CHECK(a.operator_norm() == doctest::Approx(svd_norm).epsilon(1e-5));
  CHECK(a.with_offset(17).operator_norm() == a.operator_norm());
}

TEST_CASE("instance factory fills and validates the step parameter") {
  const auto a = generate_sensing_matrix(8, 16, 3);
  Eigen::VectorXd y = Eigen::VectorXd::Ones(8);
  const double bound = 1.0 / (a.operator_norm() * a.operator_norm());

  const auto def = make_lasso_instance(a, y, 0.5);
  CHECK(def.gamma == doctest::Approx(0.95 * bound).epsilon(1e-12));
  CHECK(def.rows() == 8);
  CHECK(def.cols() == 16);

  const auto chosen = make_lasso_instance(a, y, 0.5, 0.5 * bound);
  CHECK(chosen.gamma == 0.5 * bound);

  CHECK_THROWS_AS(make_lasso_instance(a, y, 0.5, 2.0 * bound),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_lasso_instance(a, y, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(
      make_lasso_instance(a, Eigen::VectorXd::Ones(5), 0.5),
      std::invalid_argument);
}

TEST_CASE("seed derivation separates purposes and indices") {
  const auto s1 = derive_seed(42, SeedPurpose::Stream, 0);
  const auto s2 = derive_seed(42, SeedPurpose::Matrix, 0);
  const auto s3 = derive_seed(42, SeedPurpose::Stream, 1);
  const auto s4 = derive_seed(43, SeedPurpose::Stream, 0);
  CHECK(s1 != s2);
  CHECK(s1 != s3);
  CHECK(s1 != s4);
  CHECK(s1 == derive_seed(42, SeedPurpose::Stream, 0));
}

TEST_CASE("uniform and normal draws are reproducible") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(a.normal() == b.normal());
}

}  // TEST_SUITE
