#include "qreading/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "qreading/error.hpp"

namespace qreading::gaussian {

namespace {

void check_mode(const GaussianState& state, int mode) {
  if (mode < 0 || mode >= state.modes()) {
    std::ostringstream msg;
    msg << "mode index " << mode << " out of range for a " << state.modes()
        << "-mode state";
    throw DimensionError(msg.str());
  }
}

void check_kappa(double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) {
    std::ostringstream msg;
    msg << "transmissivity must lie in [0,1], got " << kappa;
    throw DomainError(msg.str());
  }
}

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int i = 0; i < modes; ++i) {
    omega(2 * i, 2 * i + 1) = 1.0;
    omega(2 * i + 1, 2 * i) = -1.0;
  }
  return omega;
}

}  // namespace

SqueezeParam::SqueezeParam(double xi) : xi_(xi) {
  if (!(xi >= 0.0) || !std::isfinite(xi)) {
    throw DomainError("squeezing magnitude must be a finite non-negative number");
  }
}

SqueezeParam SqueezeParam::from_mean_photons(double n) {
  if (!(n >= 0.0)) throw DomainError("mean photon number must be non-negative");
  return SqueezeParam(std::asinh(std::sqrt(n)));
}

double SqueezeParam::mean_photons() const {
  const double s = std::sinh(xi_);
  return s * s;
}

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  if (mean_.size() == 0 || mean_.size() % 2 != 0) {
    throw DimensionError("mean vector must have even, non-zero length");
  }
  if (covariance_.rows() != mean_.size() || covariance_.cols() != mean_.size()) {
    throw DimensionError("covariance shape does not match the mean vector");
  }
  if ((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance) {
    throw DomainError("covariance matrix is not symmetric");
  }
}

GaussianState GaussianState::vacuum(int modes) {
  if (modes < 1) throw DimensionError("a Gaussian state needs at least one mode");
  return GaussianState(Eigen::VectorXd::Zero(2 * modes),
                       Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

GaussianState GaussianState::thermal(double mean_photons) {
  if (!(mean_photons >= 0.0)) throw DomainError("mean photon number must be non-negative");
  return GaussianState(Eigen::VectorXd::Zero(2),
                       (2.0 * mean_photons + 1.0) * Eigen::MatrixXd::Identity(2, 2));
}

GaussianState tmsv(SqueezeParam squeeze) {
  const double c = std::cosh(2.0 * squeeze.xi());
  const double s = std::sinh(2.0 * squeeze.xi());
  Eigen::MatrixXd v(4, 4);
  v << c, 0, s, 0,
       0, c, 0, -s,
       s, 0, c, 0,
       0, -s, 0, c;
  return GaussianState(Eigen::VectorXd::Zero(4), v);
}

GaussianState apply_pure_loss(const GaussianState& state, int mode, double kappa) {
  check_mode(state, mode);
  check_kappa(kappa);
  const double root = std::sqrt(kappa);
  Eigen::VectorXd mean = state.mean();
  Eigen::MatrixXd v = state.covariance();
  const int lo = 2 * mode;
  mean.segment(lo, 2) *= root;
  v.middleRows(lo, 2) *= root;
  v.middleCols(lo, 2) *= root;
  // The two scalings above multiplied the diagonal block by kappa.
  v.block(lo, lo, 2, 2) += (1.0 - kappa) * Eigen::Matrix2d::Identity();
  return GaussianState(std::move(mean), std::move(v));
}

GaussianState apply_pure_loss(const GaussianState& state, std::span<const int> modes,
                              double kappa) {
  GaussianState out = state;
  for (int mode : modes) out = apply_pure_loss(out, mode, kappa);
  return out;
}

std::vector<double> symplectic_eigenvalues(const GaussianState& state) {
  const Eigen::MatrixXd& v = state.covariance();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(v);
  if (eig.info() != Eigen::Success) throw NumericalError("covariance eigensolver failed");
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw DomainError("covariance matrix is not positive definite");
  }
  const Eigen::MatrixXd root = eig.operatorSqrt();
  const Eigen::MatrixXd omega = symplectic_form(state.modes());
  // sqrt(V) (i Omega) sqrt(V) is Hermitian with eigenvalues +-nu_j.
  const Eigen::MatrixXcd h =
      std::complex<double>(0.0, 1.0) * (root * omega * root).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> heig(h, Eigen::EigenvaluesOnly);
  if (heig.info() != Eigen::Success) throw NumericalError("symplectic eigensolver failed");

  const Eigen::VectorXd& ev = heig.eigenvalues();  // ascending
  std::vector<double> nu;
  nu.reserve(static_cast<std::size_t>(state.modes()));
  for (Eigen::Index i = ev.size() - 1; i >= ev.size() - state.modes(); --i) {
    if (ev(i) < 1.0 - kPhysicalityTolerance) {
      std::ostringstream msg;
      msg << "unphysical covariance: symplectic eigenvalue " << ev(i) << " < 1";
      throw DomainError(msg.str());
    }
    nu.push_back(ev(i));
  }
  return nu;
}

math::Bits gaussian_entropy(const GaussianState& state) {
  double s = 0.0;
  for (double nu : symplectic_eigenvalues(state)) {
    s += math::thermal_entropy_g(std::max(nu, 1.0));
  }
  return s;
}

GaussianState reduced_state(const GaussianState& state, std::span<const int> keep) {
  if (keep.empty()) throw DimensionError("reduced state must keep at least one mode");
  const auto m = static_cast<Eigen::Index>(keep.size());
  Eigen::VectorXd mean(2 * m);
  Eigen::MatrixXd v(2 * m, 2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    check_mode(state, keep[i]);
    mean.segment(2 * i, 2) = state.mean().segment(2 * keep[i], 2);
    for (Eigen::Index j = 0; j < m; ++j) {
      v.block(2 * i, 2 * j, 2, 2) = state.covariance().block(2 * keep[i], 2 * keep[j], 2, 2);
    }
  }
  return GaussianState(std::move(mean), std::move(v));
}

double mean_photon_number(const GaussianState& state, int mode) {
  check_mode(state, mode);
  const int lo = 2 * mode;
  const double trace = state.covariance()(lo, lo) + state.covariance()(lo + 1, lo + 1);
  return 0.25 * (trace + state.mean().segment(lo, 2).squaredNorm()) - 0.5;
}

}  // namespace qreading::gaussian
