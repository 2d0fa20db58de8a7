#include "qreading/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qreading/error.hpp"

namespace qreading::fock {

namespace {

Eigen::Index checked_power(int dim, int modes) {
  Eigen::Index size = 1;
  for (int i = 0; i < modes; ++i) {
    if (size > std::numeric_limits<Eigen::Index>::max() / dim) {
      throw DimensionError("Fock space too large to index");
    }
    size *= dim;
  }
  return size;
}

Eigen::Index mode_stride(int dim, int modes, int mode) {
  return checked_power(dim, modes - 1 - mode);
}

int digit(Eigen::Index index, Eigen::Index stride, int dim) {
  return static_cast<int>((index / stride) % dim);
}

void check_mode(int modes, int mode) {
  if (mode < 0 || mode >= modes) {
    std::ostringstream msg;
    msg << "mode index " << mode << " out of range for a " << modes << "-mode state";
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

void check_same_space(const FockDensityMatrix& a, const FockDensityMatrix& b) {
  if (a.modes() != b.modes() || a.cutoff() != b.cutoff()) {
    throw DimensionError("density matrices live on different Fock spaces");
  }
}

[[noreturn]] void throw_tail(const char* what, double tail, int dim) {
  std::ostringstream msg;
  msg << what << ": mass " << tail << " beyond cutoff " << dim << " exceeds "
      << kTailTolerance;
  throw CutoffError(msg.str());
}

// exp(g) for a real antisymmetric generator g, through the Hermitian matrix i g.
Eigen::MatrixXcd exp_antisymmetric(const Eigen::MatrixXd& g) {
  const Eigen::MatrixXcd h = Complex(0.0, 1.0) * g.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  if (eig.info() != Eigen::Success) throw NumericalError("generator eigensolver failed");
  Eigen::VectorXcd phases(eig.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::exp(Complex(0.0, -eig.eigenvalues()(i)));
  }
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

std::vector<int> sorted_unique_modes(std::span<const int> modes, int total) {
  std::vector<int> out(modes.begin(), modes.end());
  for (int m : out) check_mode(total, m);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

FockCutoff::FockCutoff(int dim) : dim_(dim) {
  if (dim < 2) throw DomainError("Fock cutoff must be at least 2");
}

FockCutoff default_cutoff(double max_mode_photons) {
  if (!(max_mode_photons >= 0.0)) throw DomainError("mean photon number must be non-negative");
  const double mu = max_mode_photons;
  return FockCutoff(static_cast<int>(std::ceil(mu + 8.0 * std::sqrt(mu) + 15.0)));
}

FockKet::FockKet(int modes, FockCutoff cutoff, Eigen::VectorXcd amplitudes)
    : modes_(modes), cutoff_(cutoff), amplitudes_(std::move(amplitudes)) {
  if (modes < 1) throw DimensionError("a Fock state needs at least one mode");
  if (amplitudes_.size() != checked_power(cutoff.dim(), modes)) {
    throw DimensionError("amplitude vector does not match dim^modes");
  }
  const double norm = amplitudes_.squaredNorm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    std::ostringstream msg;
    msg << "ket is not normalised: squared norm " << norm;
    throw DomainError(msg.str());
  }
}

FockDensityMatrix::FockDensityMatrix(int modes, FockCutoff cutoff, Eigen::MatrixXcd matrix)
    : modes_(modes), cutoff_(cutoff), matrix_(std::move(matrix)) {
  if (modes < 1) throw DimensionError("a Fock state needs at least one mode");
  const Eigen::Index size = checked_power(cutoff.dim(), modes);
  if (size > kMaxDenseDimension) {
    std::ostringstream msg;
    msg << "dense density matrix of size " << size << " exceeds the supported "
        << kMaxDenseDimension;
    throw DimensionError(msg.str());
  }
  if (matrix_.rows() != size || matrix_.cols() != size) {
    throw DimensionError("density matrix does not match dim^modes");
  }
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
    throw DomainError("density matrix is not Hermitian");
  }
  const Complex trace = matrix_.trace();
  if (std::abs(trace - Complex(1.0, 0.0)) > kTraceTolerance) {
    std::ostringstream msg;
    msg << "density matrix trace is " << trace.real() << ", expected 1";
    throw DomainError(msg.str());
  }
}

FockDensityMatrix FockDensityMatrix::from_ket(const FockKet& ket) {
  const Eigen::VectorXcd& psi = ket.amplitudes();
  return FockDensityMatrix(ket.modes(), ket.cutoff(), psi * psi.adjoint());
}

void FockDensityMatrix::check_positive() const {
  (void)math::hermitian_spectrum(matrix_);
}

FockKet vacuum_ket(int modes, FockCutoff cutoff) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(checked_power(cutoff.dim(), modes));
  psi(0) = 1.0;
  return FockKet(modes, cutoff, std::move(psi));
}

double coherent_tail_mass(double mean_photons, int dim) {
  if (mean_photons <= 0.0) return 0.0;
  const double mu = mean_photons;
  double term = std::exp(-mu + dim * std::log(mu) - std::lgamma(dim + 1.0));
  double tail = 0.0;
  for (int k = dim; term > 0.0 && k < dim + 100000; ++k) {
    tail += term;
    if (term < 1e-18 * tail && k > mu) break;
    term *= mu / (k + 1.0);
  }
  return tail;
}

double tmsv_tail_mass(gaussian::SqueezeParam squeeze, int dim) {
  const double t = std::tanh(squeeze.xi());
  return std::pow(t * t, dim);
}

FockKet coherent_ket(Complex alpha, FockCutoff cutoff) {
  const int d = cutoff.dim();
  const double mu = std::norm(alpha);
  const double tail = coherent_tail_mass(mu, d);
  if (tail >= kTailTolerance) throw_tail("coherent state", tail, d);

  Eigen::VectorXcd psi(d);
  psi(0) = std::exp(-0.5 * mu);
  for (int k = 1; k < d; ++k) psi(k) = psi(k - 1) * alpha / std::sqrt(static_cast<double>(k));
  psi /= psi.norm();
  return FockKet(1, cutoff, std::move(psi));
}

FockKet fock_ket(int n, FockCutoff cutoff) {
  if (n < 0) throw DomainError("photon number must be non-negative");
  if (n >= cutoff.dim()) {
    std::ostringstream msg;
    msg << "number state |" << n << "> needs a cutoff above " << n << ", got "
        << cutoff.dim();
    throw CutoffError(msg.str());
  }
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(cutoff.dim());
  psi(n) = 1.0;
  return FockKet(1, cutoff, std::move(psi));
}

FockKet noon_ket(int N, FockCutoff cutoff) {
  if (N < 1) throw DomainError("NOON state needs N >= 1");
  const int d = cutoff.dim();
  if (N >= d) {
    std::ostringstream msg;
    msg << "NOON state with N = " << N << " needs a cutoff above " << N << ", got " << d;
    throw CutoffError(msg.str());
  }
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d) * d);
  psi(static_cast<Eigen::Index>(N) * d) = M_SQRT1_2;
  psi(N) = M_SQRT1_2;
  return FockKet(2, cutoff, std::move(psi));
}

FockKet tmsv_ket(gaussian::SqueezeParam squeeze, FockCutoff cutoff) {
  const int d = cutoff.dim();
  const double tail = tmsv_tail_mass(squeeze, d);
  if (tail >= kTailTolerance) throw_tail("two-mode squeezed vacuum", tail, d);

  const double t = std::tanh(squeeze.xi());
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d) * d);
  double amp = 1.0 / std::cosh(squeeze.xi());
  for (int m = 0; m < d; ++m) {
    psi(static_cast<Eigen::Index>(m) * d + m) = amp;
    amp *= t;
  }
  psi /= psi.norm();
  return FockKet(2, cutoff, std::move(psi));
}

FockKet squeezed_coherent_ket(double alpha, double xi, FockCutoff cutoff) {
  if (!(alpha >= 0.0) || !(xi >= 0.0)) {
    throw DomainError("squeezed coherent state needs alpha >= 0 and xi >= 0");
  }
  const int d = cutoff.dim();
  const int padded = d + kGeneratorPadding;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(padded, padded);
  for (int k = 1; k < padded; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Eigen::MatrixXd ad = a.transpose();

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(padded);
  psi(0) = 1.0;
  if (xi > 0.0) {
    // S = exp(xi/2 (a^dag^2 - a^2)) squeezes the momentum quadrature.
    psi = exp_antisymmetric(0.5 * xi * (ad * ad - a * a)) * psi;
  }
  if (alpha > 0.0) {
    psi = exp_antisymmetric(alpha * (ad - a)) * psi;
  }

  const double tail = psi.tail(padded - d).squaredNorm();
  if (tail >= kTailTolerance) throw_tail("squeezed coherent state", tail, d);
  Eigen::VectorXcd head = psi.head(d);
  head /= head.norm();
  return FockKet(1, cutoff, std::move(head));
}

Eigen::MatrixXd loss_kraus_table(int dim, double kappa) {
  check_kappa(kappa);
  Eigen::MatrixXd binom = Eigen::MatrixXd::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) {
    binom(m, 0) = 1.0;
    for (int k = 1; k <= m; ++k) binom(m, k) = binom(m - 1, k - 1) + (k < m ? binom(m - 1, k) : 0.0);
  }
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) {
    for (int k = 0; k <= m; ++k) {
      c(m, k) = std::sqrt(binom(m, k)) * std::pow(1.0 - kappa, 0.5 * k) *
                std::pow(kappa, 0.5 * (m - k));
    }
  }
  return c;
}

FockDensityMatrix loss_channel(const FockDensityMatrix& rho, int mode, double kappa) {
  check_mode(rho.modes(), mode);
  const int d = rho.dim();
  const Eigen::MatrixXd c = loss_kraus_table(d, kappa);
  const Eigen::Index stride = mode_stride(d, rho.modes(), mode);
  const Eigen::Index size = rho.size();
  const Eigen::MatrixXcd& in = rho.matrix();

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    const int b = digit(j, stride, d);
    for (Eigen::Index i = 0; i < size; ++i) {
      const Complex value = in(i, j);
      if (value == Complex(0.0, 0.0)) continue;
      const int a = digit(i, stride, d);
      for (int k = 0; k <= std::min(a, b); ++k) {
        out(i - k * stride, j - k * stride) += c(a, k) * c(b, k) * value;
      }
    }
  }
  // Kraus sums leave ~1e-16 asymmetry; restore exact hermiticity.
  out = 0.5 * (out + out.adjoint()).eval();
  return FockDensityMatrix(rho.modes(), rho.cutoff(), std::move(out));
}

Eigen::MatrixXcd loss_kraus_vectors(const FockKet& ket, int mode, double kappa) {
  check_mode(ket.modes(), mode);
  const int d = ket.dim();
  const Eigen::MatrixXd c = loss_kraus_table(d, kappa);
  const Eigen::Index stride = mode_stride(d, ket.modes(), mode);
  const Eigen::VectorXcd& psi = ket.amplitudes();

  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(ket.size(), d);
  for (Eigen::Index i = 0; i < ket.size(); ++i) {
    if (psi(i) == Complex(0.0, 0.0)) continue;
    const int a = digit(i, stride, d);
    for (int k = 0; k <= a; ++k) v(i - k * stride, k) += c(a, k) * psi(i);
  }
  return v;
}

Eigen::MatrixXcd loss_overlap_gram(const Eigen::MatrixXcd& reduced, double kappa_a,
                                   double kappa_b) {
  if (reduced.rows() != reduced.cols() || reduced.rows() < 1) {
    throw DimensionError("reduced density matrix must be square");
  }
  const int d = static_cast<int>(reduced.rows());
  const Eigen::MatrixXd ca = loss_kraus_table(d, kappa_a);
  const Eigen::MatrixXd cb = loss_kraus_table(d, kappa_b);

  bool diagonal = true;
  for (int j = 0; j < d && diagonal; ++j) {
    for (int i = 0; i < d; ++i) {
      if (i != j && reduced(i, j) != Complex(0.0, 0.0)) {
        diagonal = false;
        break;
      }
    }
  }

  // G(k,l) = sum_j ca(j+k,k) cb(j+l,l) <j+l|R|j+k>
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
  for (int l = 0; l < d; ++l) {
    for (int k = 0; k < d; ++k) {
      if (diagonal && k != l) continue;
      Complex sum = 0.0;
      for (int j = 0; j + std::max(k, l) < d; ++j) {
        sum += ca(j + k, k) * cb(j + l, l) * reduced(j + l, j + k);
      }
      g(k, l) = sum;
    }
  }
  return g;
}

FockKet tensor(const FockKet& a, const FockKet& b) {
  if (a.cutoff() != b.cutoff()) throw DimensionError("tensor factors need a common cutoff");
  Eigen::VectorXcd psi(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    psi.segment(i * b.size(), b.size()) = a.amplitudes()(i) * b.amplitudes();
  }
  return FockKet(a.modes() + b.modes(), a.cutoff(), std::move(psi));
}

FockDensityMatrix tensor(const FockDensityMatrix& a, const FockDensityMatrix& b) {
  if (a.cutoff() != b.cutoff()) throw DimensionError("tensor factors need a common cutoff");
  const Eigen::Index nb = b.size();
  const Eigen::Index size = checked_power(a.dim(), a.modes() + b.modes());
  if (size > kMaxDenseDimension) throw DimensionError("tensor product too large for dense storage");
  Eigen::MatrixXcd out(size, size);
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
    }
  }
  return FockDensityMatrix(a.modes() + b.modes(), a.cutoff(), std::move(out));
}

FockDensityMatrix partial_trace(const FockDensityMatrix& rho, std::span<const int> keep) {
  const std::vector<int> kept = sorted_unique_modes(keep, rho.modes());
  if (kept.empty()) throw DimensionError("partial trace must keep at least one mode");
  const int d = rho.dim();
  const int modes = rho.modes();
  std::vector<bool> is_kept(static_cast<std::size_t>(modes), false);
  for (int m : kept) is_kept[m] = true;

  const Eigen::Index size = rho.size();
  // Split every basis index into (kept index, traced index).
  std::vector<Eigen::Index> kept_index(static_cast<std::size_t>(size));
  std::vector<Eigen::Index> traced_index(static_cast<std::size_t>(size));
  for (Eigen::Index i = 0; i < size; ++i) {
    Eigen::Index k = 0;
    Eigen::Index t = 0;
    for (int m = 0; m < modes; ++m) {
      const int n = digit(i, mode_stride(d, modes, m), d);
      if (is_kept[m]) k = k * d + n;
      else t = t * d + n;
    }
    kept_index[i] = k;
    traced_index[i] = t;
  }
  const Eigen::Index out_size = checked_power(d, static_cast<int>(kept.size()));
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_size, out_size);
  for (Eigen::Index j = 0; j < size; ++j) {
    for (Eigen::Index i = 0; i < size; ++i) {
      if (traced_index[i] == traced_index[j]) {
        out(kept_index[i], kept_index[j]) += rho.matrix()(i, j);
      }
    }
  }
  return FockDensityMatrix(static_cast<int>(kept.size()), rho.cutoff(), std::move(out));
}

Eigen::MatrixXcd reduced_single_mode(const FockKet& ket, int mode) {
  check_mode(ket.modes(), mode);
  const int d = ket.dim();
  const Eigen::Index stride = mode_stride(d, ket.modes(), mode);
  const Eigen::Index rest = ket.size() / d;
  // Row = photon number of `mode`, column = joint index of the other modes.
  Eigen::MatrixXcd m(d, rest);
  for (Eigen::Index i = 0; i < ket.size(); ++i) {
    const int n = digit(i, stride, d);
    const Eigen::Index other = (i / (stride * d)) * stride + i % stride;
    m(n, other) = ket.amplitudes()(i);
  }
  return m * m.adjoint();
}

double trace_distance_norm(const FockDensityMatrix& rho, const FockDensityMatrix& sigma) {
  check_same_space(rho, sigma);
  const Eigen::MatrixXcd diff = rho.matrix() - sigma.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(diff, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("eigensolver failed in trace distance");
  return std::min(eig.eigenvalues().cwiseAbs().sum(), 2.0);
}

double fidelity_pure(const FockKet& psi, const FockKet& phi) {
  if (psi.modes() != phi.modes() || psi.cutoff() != phi.cutoff()) {
    throw DimensionError("kets live on different Fock spaces");
  }
  return std::min(std::norm(psi.amplitudes().dot(phi.amplitudes())), 1.0);
}

double fidelity(const FockDensityMatrix& rho, const FockDensityMatrix& sigma) {
  check_same_space(rho, sigma);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho.matrix());
  if (eig.info() != Eigen::Success) throw NumericalError("eigensolver failed in fidelity");
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXcd sqrt_rho =
      eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().adjoint();
  const Eigen::MatrixXcd m = sqrt_rho * sigma.matrix() * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> inner(0.5 * (m + m.adjoint()),
                                                        Eigen::EigenvaluesOnly);
  if (inner.info() != Eigen::Success) throw NumericalError("eigensolver failed in fidelity");
  const double root_fidelity = inner.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(root_fidelity * root_fidelity, 0.0, 1.0);
}

double mean_photon_number(const FockKet& ket, std::span<const int> modes) {
  const std::vector<int> listed = sorted_unique_modes(modes, ket.modes());
  const int d = ket.dim();
  double total = 0.0;
  for (Eigen::Index i = 0; i < ket.size(); ++i) {
    const double w = std::norm(ket.amplitudes()(i));
    if (w == 0.0) continue;
    int n = 0;
    for (int m : listed) n += digit(i, mode_stride(d, ket.modes(), m), d);
    total += w * n;
  }
  return total;
}

double mean_photon_number(const FockDensityMatrix& rho, std::span<const int> modes) {
  const std::vector<int> listed = sorted_unique_modes(modes, rho.modes());
  const int d = rho.dim();
  double total = 0.0;
  for (Eigen::Index i = 0; i < rho.size(); ++i) {
    int n = 0;
    for (int m : listed) n += digit(i, mode_stride(d, rho.modes(), m), d);
    total += rho.matrix()(i, i).real() * n;
  }
  return total;
}

math::Spectrum spectrum(const FockDensityMatrix& rho) {
  return math::hermitian_spectrum(rho.matrix());
}

math::Bits entropy(const FockDensityMatrix& rho) {
  return math::von_neumann_entropy(spectrum(rho));
}

}  // namespace qreading::fock
