#pragma once

// Entropy functions and spectra. Every information quantity in the library
// is measured in bits (base-2 logarithms).

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qreading::math {

using Bits = double;

// Slack allowed on probability arguments before a DomainError is raised.
inline constexpr double kProbabilitySlack = 1e-12;
// Eigenvalues at or above this (and below zero) are rounding noise and are
// clamped to zero; anything lower means the operator is not positive.
inline constexpr double kNegativeEigenvalueFloor = -1e-8;
inline constexpr double kSpectrumTraceTolerance = 1e-6;

// A real number in [0,1]. Values within kProbabilitySlack of the interval
// are snapped onto it.
class Probability {
 public:
  explicit Probability(double value);

  double value() const { return value_; }
  Probability complement() const { return Probability(1.0 - value_); }

 private:
  double value_;
};

// Eigenvalues of a density operator, clamped to be non-negative.
class Spectrum {
 public:
  Spectrum() = default;

  // Clamps eigenvalues in [kNegativeEigenvalueFloor, 0) to zero. Throws
  // NumericalError for anything lower.
  static Spectrum from_eigenvalues(std::vector<double> eigenvalues);

  const std::vector<double>& values() const { return values_; }
  double sum() const;
  std::size_t size() const { return values_.size(); }

 private:
  explicit Spectrum(std::vector<double> values) : values_(std::move(values)) {}

  std::vector<double> values_;
};

/// Shannon entropy of a binary distribution {x, 1-x}.
Bits binary_entropy(double x);

/// -sum(lambda log2 lambda). Throws NumericalError when the spectrum does not
/// sum to one within kSpectrumTraceTolerance.
Bits von_neumann_entropy(const Spectrum& spectrum);

/// Entropy of a single-mode thermal state with symplectic eigenvalue nu
/// (vacuum normalised to nu = 1).
Bits thermal_entropy_g(double nu);

/// Holevo information of a binary ensemble of pure states with priors
/// (p, 1-p) and overlap |<a|b>|^2 = fidelity.
Bits two_pure_state_holevo(double p, double fidelity);

// One positive operator given through its eigendecomposition,
// weight * sum_i eigenvalues[i] |v_i><v_i| with v_i the columns of vectors.
struct LowRankComponent {
  double weight = 1.0;
  Eigen::MatrixXcd vectors;
  Eigen::VectorXd eigenvalues;
};

/// Entropy of sum_c weight_c * rho_c without forming the full operator: the
/// non-zero spectrum of W W^dagger equals that of the Gram matrix W^dagger W.
Bits mixture_entropy_low_rank(std::span<const LowRankComponent> components);

/// Spectrum of a Hermitian positive matrix.
Spectrum hermitian_spectrum(const Eigen::MatrixXcd& matrix);

/// Same, but splits the matrix into independent blocks first (entries that
/// are exactly zero decouple indices). Useful for Gram matrices with
/// selection rules, e.g. those of diagonal reduced states.
Spectrum block_hermitian_spectrum(const Eigen::MatrixXcd& matrix);

/// Entropy of the operator W W^dagger given its Gram matrix W^dagger W.
Bits gram_entropy(const Eigen::MatrixXcd& gram);

}  // namespace qreading::math
