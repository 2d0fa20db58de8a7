#pragma once

// Covariance-matrix description of Gaussian states and pure-loss channels.
//
// Conventions: quadratures are interleaved (x1, p1, x2, p2, ...) with
// x = a + a^dagger and p = -i(a - a^dagger), so the vacuum covariance is the
// identity and every symplectic eigenvalue of a physical state is >= 1.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qreading/core_math.hpp"

namespace qreading::gaussian {

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kPhysicalityTolerance = 1e-8;

// Two-mode squeezing magnitude; the signal arm carries sinh^2(xi) photons.
class SqueezeParam {
 public:
  explicit SqueezeParam(double xi);
  static SqueezeParam from_mean_photons(double n);

  double xi() const { return xi_; }
  double mean_photons() const;

 private:
  double xi_;
};

class GaussianState {
 public:
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

  static GaussianState vacuum(int modes);
  static GaussianState thermal(double mean_photons);

  int modes() const { return static_cast<int>(mean_.size() / 2); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
};

GaussianState tmsv(SqueezeParam squeeze);

GaussianState apply_pure_loss(const GaussianState& state, int mode, double kappa);
GaussianState apply_pure_loss(const GaussianState& state, std::span<const int> modes,
                              double kappa);

/// Williamson spectrum, sorted descending. Throws DomainError when the state
/// is unphysical.
std::vector<double> symplectic_eigenvalues(const GaussianState& state);

math::Bits gaussian_entropy(const GaussianState& state);

/// Partial trace: keeps the listed modes, in the order given.
GaussianState reduced_state(const GaussianState& state, std::span<const int> keep);

double mean_photon_number(const GaussianState& state, int mode);

}  // namespace qreading::gaussian
