#pragma once

// Truncated Fock-space engine. Multimode states use one cutoff for every
// mode; basis index I = n_0 * dim^(m-1) + n_1 * dim^(m-2) + ... + n_{m-1},
// i.e. mode 0 is the most significant digit.

#include <complex>
#include <compare>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qreading/core_math.hpp"
#include "qreading/gaussian.hpp"

namespace qreading::fock {

using Complex = std::complex<double>;

// Probability mass a constructor may discard beyond the cutoff.
inline constexpr double kTailTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-9;
// Extra levels used while exponentiating squeeze/displacement generators.
inline constexpr int kGeneratorPadding = 10;
// Largest dense density matrix (rows) we agree to build.
inline constexpr Eigen::Index kMaxDenseDimension = 2048;

class FockCutoff {
 public:
  explicit FockCutoff(int dim);

  int dim() const { return dim_; }
  auto operator<=>(const FockCutoff&) const = default;

 private:
  int dim_;
};

/// ceil(mu + 8 sqrt(mu) + 15) for a mode carrying at most mu mean photons.
FockCutoff default_cutoff(double max_mode_photons);

class FockKet {
 public:
  // Throws DomainError unless the amplitudes are normalised within
  // kNormTolerance.
  FockKet(int modes, FockCutoff cutoff, Eigen::VectorXcd amplitudes);

  int modes() const { return modes_; }
  FockCutoff cutoff() const { return cutoff_; }
  int dim() const { return cutoff_.dim(); }
  Eigen::Index size() const { return amplitudes_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }

 private:
  int modes_;
  FockCutoff cutoff_;
  Eigen::VectorXcd amplitudes_;
};

class FockDensityMatrix {
 public:
  // Checks shape, hermiticity (kHermitianTolerance) and unit trace
  // (kTraceTolerance). Positivity is checked separately because it needs a
  // full eigendecomposition.
  FockDensityMatrix(int modes, FockCutoff cutoff, Eigen::MatrixXcd matrix);

  static FockDensityMatrix from_ket(const FockKet& ket);

  int modes() const { return modes_; }
  FockCutoff cutoff() const { return cutoff_; }
  int dim() const { return cutoff_.dim(); }
  Eigen::Index size() const { return matrix_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  /// Throws NumericalError if an eigenvalue is below
  /// math::kNegativeEigenvalueFloor.
  void check_positive() const;

 private:
  int modes_;
  FockCutoff cutoff_;
  Eigen::MatrixXcd matrix_;
};

// ---- constructors -------------------------------------------------------

FockKet vacuum_ket(int modes, FockCutoff cutoff);
FockKet coherent_ket(Complex alpha, FockCutoff cutoff);
FockKet fock_ket(int n, FockCutoff cutoff);
/// (|N,0> + |0,N>)/sqrt(2) on (signal, reference).
FockKet noon_ket(int N, FockCutoff cutoff);
/// sum_m tanh(xi)^m / cosh(xi) |m>_S |m>_R.
FockKet tmsv_ket(gaussian::SqueezeParam squeeze, FockCutoff cutoff);
/// D(alpha) S(xi)|0> with alpha >= 0 displacing the position quadrature and
/// the squeezing reducing momentum noise.
FockKet squeezed_coherent_ket(double alpha, double xi, FockCutoff cutoff);

/// Poisson mass of |alpha> at levels >= dim.
double coherent_tail_mass(double mean_photons, int dim);
/// Mass of a TMSV ket at Schmidt levels >= dim, i.e. tanh(xi)^(2 dim).
double tmsv_tail_mass(gaussian::SqueezeParam squeeze, int dim);

// ---- channels -----------------------------------------------------------

/// sqrt(C(m,k) (1-kappa)^k kappa^(m-k)): matrix element <m-k|A_k|m> of the
/// pure-loss Kraus operator A_k. Rows m, columns k, for m,k < dim.
Eigen::MatrixXd loss_kraus_table(int dim, double kappa);

FockDensityMatrix loss_channel(const FockDensityMatrix& rho, int mode, double kappa);

/// Kraus branches v_k = (A_k on `mode`)|psi>, as columns. The output state is
/// sum_k v_k v_k^dagger.
Eigen::MatrixXcd loss_kraus_vectors(const FockKet& ket, int mode, double kappa);

/// Overlaps <v_k^a | v_l^b> between the Kraus branches of one probe sent
/// through losses kappa_a and kappa_b on a single mode. Only the reduced
/// density matrix of that mode is needed; the untouched modes enter through
/// the partial trace.
Eigen::MatrixXcd loss_overlap_gram(const Eigen::MatrixXcd& reduced, double kappa_a,
                                   double kappa_b);

// ---- multilinear algebra ------------------------------------------------

FockKet tensor(const FockKet& a, const FockKet& b);
FockDensityMatrix tensor(const FockDensityMatrix& a, const FockDensityMatrix& b);
/// Keeps the listed modes (ascending order in the result).
FockDensityMatrix partial_trace(const FockDensityMatrix& rho, std::span<const int> keep);
/// Reduced density matrix of one mode of a pure state.
Eigen::MatrixXcd reduced_single_mode(const FockKet& ket, int mode);

// ---- figures of merit ---------------------------------------------------

/// ||rho - sigma||_1, in [0, 2].
double trace_distance_norm(const FockDensityMatrix& rho, const FockDensityMatrix& sigma);
/// |<psi|phi>|^2.
double fidelity_pure(const FockKet& psi, const FockKet& phi);
/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const FockDensityMatrix& rho, const FockDensityMatrix& sigma);

double mean_photon_number(const FockKet& ket, std::span<const int> modes);
double mean_photon_number(const FockDensityMatrix& rho, std::span<const int> modes);

math::Spectrum spectrum(const FockDensityMatrix& rho);
math::Bits entropy(const FockDensityMatrix& rho);

}  // namespace qreading::fock
