// Reference LASSO instance solved independently to machine precision
// (accelerated proximal gradient + exact least-squares polish on the
// identified support; KKT residuals verified below 1e-12 before freezing).
#pragma once

#include <Eigen/Dense>

namespace oracle {

inline constexpr double kLambda1 = 0.12;

// 6 x 10 Gaussian design, entries scaled by 1/sqrt(m).
inline Eigen::MatrixXd matrix1() {
  Eigen::MatrixXd a(6, 10);
  a << 0.12440022688488721, -0.42457173348227084, 0.30637041776454793,
      0.38398393753734122, -0.79650678040276923, -0.53161255755361758,
      0.052190626045255276, -0.12910549769612778, -0.0068590438289400047,
      -0.34825372512249347,  //
      0.35901271987513295, 0.3175322279754475, 0.026956919397502822,
      0.46019429568512105, 0.19085988975028267, -0.3508046789805645,
      0.15054187720888923, -0.39146218254398157, 0.35862583376615942,
      -0.020382167809988742,  //
      -0.075469743888461782, -0.2779883224292462, 0.49910041153507545,
      -0.063086396880854656, -0.17486410115619808, -0.14375792000179013,
      0.21731431500036588, 0.14919191453680092, 0.16849738310274784,
      0.17588193797389493,  //
      0.87432397183139954, -0.16591823565786221, -0.20912221844599888,
      -0.33222132513330987, 0.25147254622736359, 0.46090100848437199,
      -0.046518854790306173, -0.34299244544209401, -0.33659304682551611,
      0.26560339341755301,  //
      0.30343224477394071, 0.22174180149374625, -0.27169320028771532,
      0.094779463253816962, 0.047636782103094903, 0.089279245758560694,
      0.35575930885836182, 0.091282500542593348, 0.27716530149683116,
      0.027589039589978548,  //
      0.11803250025512607, 0.25772233898854924, -0.59488137239554462,
      -0.13050522758837196, -0.19202883199598342, -0.26082078936057568,
      -0.11232635369767235, 0.61030723465524794, -0.35347407281218579,
      0.39529798295513424;
  return a;
}

inline Eigen::VectorXd rhs1() {
  Eigen::VectorXd y(6);
  y << 0.74290697430521413, -0.31362787158066446, 0.090075286460578038,
      -1.0655037748156506, 0.36418296756666568, 1.4206157688900349;
  return y;
}

inline Eigen::VectorXd solution1() {
  Eigen::VectorXd x(10);
  x << 0, 0, -0.38774217694395996, 0, -0.56532357293759727,
      -0.8706992070328794, 0, 1.2350898702148536, 0, 0;
  return x;
}

inline constexpr double kObjectiveAtSolution1 = 0.43341777067952397;

// Envelope evaluation point for the same instance, with the step parameter
// fixed at 0.9 / ||A||_2^2 (spectral norm computed by full SVD).
inline constexpr double kGamma1 = 0.39068139520108169;

inline Eigen::VectorXd envelope_point1() {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(10);
  x[0] = 0.29999999999999999;
  x[4] = -1.1000000000000001;
  return x;
}

inline constexpr double kEnvelopeValue1 = 0.96662191208828774;
inline constexpr double kObjectiveAtPoint1 = 1.5026513253853346;
inline constexpr double kResidualNormAtPoint1 = 0.62413795780885817;

inline Eigen::VectorXd prox_point1() {
  Eigen::VectorXd z(10);
  z << 0, 0.17838256135448025, -0.21280511049988277, 0, -1.195650946169746,
      -0.181800278312196, 0, 0.42179523116483769, 0, 0.048271890335901436;
  return z;
}

}  // namespace oracle
