#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "oracle_data.hpp"
#include "rcslasso/model.hpp"
#include "rcslasso/prox.hpp"
#include "rcslasso/rng.hpp"

using namespace rcslasso;

namespace {

LassoInstance oracle_instance() {
  return make_lasso_instance(SensingMatrix{oracle::matrix1()}, oracle::rhs1(),
                             oracle::kLambda1, oracle::kGamma1);
}

Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n, double zero_prob) {
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i)
    x[i] = rng.uniform() < zero_prob ? 0.0 : rng.normal();
  return x;
}

}  // namespace

TEST_SUITE("prox") {

TEST_CASE("soft threshold shrinks toward zero componentwise") {
  Eigen::VectorXd z(5);
  z << 3.0, -0.25, 0.5, -1.5, 0.0;
  const Eigen::VectorXd out = soft_threshold(z, 1.0);
  Eigen::VectorXd want(5);
  want << 2.0, 0.0, 0.0, -0.5, 0.0;
  CHECK((out - want).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(soft_threshold(z, 0.0) == z);
}

TEST_CASE("residual cache carries A x - y and its gradient") {
  const auto inst = oracle_instance();
  const Eigen::VectorXd x = oracle::envelope_point1();
  const auto cache = residual_cache(inst, x);
  const Eigen::MatrixXd a = oracle::matrix1();
  CHECK((cache.r - (a * x - oracle::rhs1())).lpNorm<Eigen::Infinity>() <
        1e-15);
  CHECK((cache.grad - a.transpose() * cache.r).lpNorm<Eigen::Infinity>() <
        1e-15);
}

TEST_CASE("forward-backward step reproduces the independent prox point") {
  const auto inst = oracle_instance();
  const Eigen::VectorXd x = oracle::envelope_point1();
  const auto cache = residual_cache(inst, x);
  const Eigen::VectorXd z = forward_backward_step(inst, x, cache.grad,
                                                  inst.lambda);
  CHECK((z - oracle::prox_point1()).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("fixed-point residual matches the frozen norm and vanishes at the solution") {
  const auto inst = oracle_instance();
  const Eigen::VectorXd r = fixed_point_residual(inst, oracle::envelope_point1());
  CHECK(r.norm() ==
        doctest::Approx(oracle::kResidualNormAtPoint1).epsilon(1e-13));
  CHECK(fixed_point_residual(inst, oracle::solution1()).norm() < 1e-12);
}

TEST_CASE("residual with a continuation weight uses that weight") {
  const auto inst = oracle_instance();
  const Eigen::VectorXd x = oracle::envelope_point1();
  CHECK(fixed_point_residual(inst, x, inst.lambda) ==
        fixed_point_residual(inst, x));
  // a huge weight prox-es everything to zero, so R = x - 0
  const Eigen::VectorXd r_big = fixed_point_residual(inst, x, 1e6);
  CHECK((r_big - x).lpNorm<Eigen::Infinity>() < 1e-15);
}

TEST_CASE("envelope value matches the independent evaluation") {
  const auto inst = oracle_instance();
  CHECK(fbe_value(inst, oracle::envelope_point1()) ==
        doctest::Approx(oracle::kEnvelopeValue1).epsilon(1e-14));
  CHECK(objective_value(inst, oracle::envelope_point1()) ==
        doctest::Approx(oracle::kObjectiveAtPoint1).epsilon(1e-14));
  CHECK(objective_value(inst, oracle::solution1()) ==
        doctest::Approx(oracle::kObjectiveAtSolution1).epsilon(1e-14));
}

TEST_CASE("envelope is sandwiched between objectives at x and T(x)") {
  Rng rng(404);
  for (int trial = 0; trial < 25; ++trial) {
    const auto mat = generate_sensing_matrix(8, 20, 1000 + trial);
    Eigen::VectorXd y(8);
    for (Eigen::Index i = 0; i < 8; ++i) y[i] = rng.normal();
    const auto inst = make_lasso_instance(mat, y, 0.2);
    const Eigen::VectorXd x = random_vector(rng, 20, 0.5);

    const auto cache = residual_cache(inst, x);
    const Eigen::VectorXd z = forward_backward_step(inst, x, cache.grad,
                                                    inst.lambda);
    const double fbe = fbe_value(inst, x);
    CHECK(objective_value(inst, z) <= fbe + 1e-12);
    CHECK(fbe <= objective_value(inst, x) + 1e-12);
  }
}

TEST_CASE("envelope gradient agrees with central finite differences") {
  Rng rng(505);
  const auto mat = generate_sensing_matrix(9, 16, 77);
  Eigen::VectorXd y(9);
  for (Eigen::Index i = 0; i < 9; ++i) y[i] = rng.normal();
  const auto inst = make_lasso_instance(mat, y, 0.15);

  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd x = random_vector(rng, 16, 0.4);
    const Eigen::VectorXd grad = fbe_gradient(inst, x);
    Eigen::VectorXd fd(16);
    for (Eigen::Index i = 0; i < 16; ++i) {
      const double h = 5e-6 * std::max(1.0, std::abs(x[i]));
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      fd[i] = (fbe_value(inst, xp) - fbe_value(inst, xm)) / (2.0 * h);
    }
    CHECK((grad - fd).norm() / fd.norm() < 1e-5);
  }
}

TEST_CASE("envelope gradient vanishes only at the solution") {
  const auto inst = oracle_instance();
  CHECK(fbe_gradient(inst, oracle::solution1()).norm() < 1e-11);
  CHECK(fbe_gradient(inst, oracle::envelope_point1()).norm() > 0.1);
}

TEST_CASE("subdifferential check accepts the solution and rejects others") {
  const auto inst = oracle_instance();
  CHECK(satisfies_optimality(inst, oracle::solution1(), 1e-8));
  CHECK_FALSE(satisfies_optimality(inst, oracle::envelope_point1(), 1e-8));
  Eigen::VectorXd off = oracle::solution1();
  off[2] += 1e-3;
  CHECK_FALSE(satisfies_optimality(inst, off, 1e-8));
}

}  // TEST_SUITE
