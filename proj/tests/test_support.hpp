#pragma once

// Shared helpers for the unit and acceptance tests: frozen reference values
// and random-state generators.

#include <complex>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "qreading/fock.hpp"

namespace oracle {

// Evaluated independently at 30 significant digits (mpmath) or by dense
// numpy/scipy matrices in double precision (the chi values).
inline constexpr double kH025 = 0.811278124459132863909695792039;
inline constexpr double kG2 = 1.37744375108173427218060841592;
inline constexpr double kHolevoHalfExpMinus1 = 0.715349166710721734438678661018;
inline constexpr double kCoherentOverlap = 0.612626394184416068988579968019;  // e^-0.49
inline constexpr double kPcQuarterOneN1 = 0.264840895919063378188078364797;
inline constexpr double kIcHalfPoint9N5 = 0.191163658535524732160017578544;
inline constexpr double kCcHalfPoint9N5 = 0.357950950626827093210493854232;
inline constexpr double kOmegaHalfPoint9 = 0.134752415750147212513578431888;
inline constexpr double kBoundZeroOneN1 = 0.111565080074214914466640235382;
inline constexpr double kNthZeroOne = 1.38629436111989061883446424292;
inline constexpr double kNthHalfOne = 2.77258872223978123766892848583;
inline constexpr double kThetaZeroN1 = 0.0676676416183063459469997474862;
inline constexpr double kQZeroS1N1 = 0.456435556800403594011723152578;
inline constexpr double kIcQuarterOneN1 = 0.166036159633702802004485233055;

// Entropy of a TMSV whose signal went through loss kappa, from the
// two-mode symplectic spectrum.
struct LossyTmsvEntropy {
  double xi;
  double kappa;
  double entropy;
};
inline constexpr double kAsinh1 = 0.881373587019543025232609324979;
inline constexpr LossyTmsvEntropy kLossyTmsv[] = {
    {0.3, 0.1, 0.424313377567455357},     {0.3, 0.5, 0.27385865701728927},
    {0.3, 0.9, 0.0760599466331123975},    {0.3, 1.0, 0.0},
    {kAsinh1, 0.1, 1.89620167935736896},  {kAsinh1, 0.5, 1.37744375108173427},
    {kAsinh1, 0.9, 0.483446685613664634}, {kAsinh1, 1.0, 0.0},
    {1.2, 0.1, 2.78419807303922974},      {1.2, 0.5, 2.13269493923690049},
    {1.2, 0.9, 0.84979840434073745},      {1.2, 1.0, 0.0},
};

// Dense Fock-space Holevo information (cutoff 40 to 120 per mode, until the
// value stops moving).
inline constexpr double kChiEprHalfOneN1 = 0.3326245043264957;
inline constexpr double kChiEprPoint2Point7Prior3N1 = 0.2509355285683167;
inline constexpr double kChiEprZeroOneN1 = 0.723813944145777;
inline constexpr double kChiNoonHalfOneN1 = 0.35282831728529945;
inline constexpr double kChiNoonPoint3Point8N15 = 0.3270110953995191;
inline constexpr double kChiFockHalfOneN1 = 0.311278124459132864;
// D(0.8) S(asinh 0.6)|0>, cell {0, 0.5}.
inline constexpr double kChiSqcZeroHalfN1 = 0.2761812634015153;
// D(1) S(asinh 1)|0>, cell {0.2, 0.9}.
inline constexpr double kChiSqcPoint2Point9N2 = 0.2589674891612856;
// Position and momentum variances of D(0.8) S(asinh 0.6)|0>.
inline constexpr double kSqcVarX = 3.1194284547626547;
inline constexpr double kSqcVarP = 0.3205715452371607;

}  // namespace oracle

namespace test {

inline Eigen::MatrixXcd random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = {n(rng), n(rng)};
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return qr.householderQ();
}

inline Eigen::VectorXd random_simplex(int size, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  Eigen::VectorXd w(size);
  for (int i = 0; i < size; ++i) w(i) = e(rng);
  return w / w.sum();
}

inline Eigen::VectorXcd random_unit_vector(Eigen::Index size, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXcd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = {n(rng), n(rng)};
  return v.normalized();
}

// Random mixed state of the given rank on one or more modes.
inline qreading::fock::FockDensityMatrix random_density(int modes, int dim, int rank,
                                                        std::mt19937_64& rng) {
  Eigen::Index size = 1;
  for (int m = 0; m < modes; ++m) size *= dim;
  const Eigen::VectorXd w = random_simplex(rank, rng);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(size, size);
  for (int r = 0; r < rank; ++r) {
    const Eigen::VectorXcd v = random_unit_vector(size, rng);
    rho += w(r) * v * v.adjoint();
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return qreading::fock::FockDensityMatrix(modes, qreading::fock::FockCutoff(dim), rho);
}

}  // namespace test
