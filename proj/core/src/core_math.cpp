#include "qreading/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "qreading/error.hpp"

namespace qreading::math {

namespace {

double snap_unit_interval(double x, const char* what) {
  if (!(x >= -kProbabilitySlack && x <= 1.0 + kProbabilitySlack)) {
    std::ostringstream msg;
    msg << what << " must lie in [0,1], got " << x;
    throw DomainError(msg.str());
  }
  return std::clamp(x, 0.0, 1.0);
}

// -x log2 x with the 0 log 0 = 0 convention.
double neg_xlog2x(double x) {
  if (x <= 0.0) return 0.0;
  return -x * std::log2(x);
}

// Union-find over indices coupled by non-zero off-diagonal entries.
std::vector<std::vector<Eigen::Index>> coupled_blocks(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  std::function<Eigen::Index(Eigen::Index)> find = [&](Eigen::Index i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (m(i, j) != std::complex<double>(0.0, 0.0)) {
        const Eigen::Index a = find(i);
        const Eigen::Index b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<Eigen::Index>> blocks;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Eigen::Index>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[root]].push_back(i);
  }
  return blocks;
}

}  // namespace

Probability::Probability(double value)
    : value_(snap_unit_interval(value, "probability")) {}

Spectrum Spectrum::from_eigenvalues(std::vector<double> eigenvalues) {
  for (double& lambda : eigenvalues) {
    if (!std::isfinite(lambda)) {
      throw NumericalError("spectrum contains a non-finite eigenvalue");
    }
    if (lambda < kNegativeEigenvalueFloor) {
      std::ostringstream msg;
      msg << "operator is not positive: eigenvalue " << lambda;
      throw NumericalError(msg.str());
    }
    if (lambda < 0.0) lambda = 0.0;
  }
  std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<>());
  return Spectrum(std::move(eigenvalues));
}

double Spectrum::sum() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

Bits binary_entropy(double x) {
  x = snap_unit_interval(x, "binary_entropy argument");
  if (x == 0.0 || x == 1.0) return 0.0;
  return neg_xlog2x(x) + neg_xlog2x(1.0 - x);
}

Bits von_neumann_entropy(const Spectrum& spectrum) {
  const double total = spectrum.sum();
  if (std::abs(total - 1.0) > kSpectrumTraceTolerance) {
    std::ostringstream msg;
    msg << "spectrum sums to " << total << ", expected 1";
    throw NumericalError(msg.str());
  }
  double s = 0.0;
  for (double lambda : spectrum.values()) s += neg_xlog2x(lambda);
  return std::max(s, 0.0);
}

Bits thermal_entropy_g(double nu) {
  if (!(nu >= 1.0 - 1e-9)) {
    std::ostringstream msg;
    msg << "symplectic eigenvalue must be >= 1, got " << nu;
    throw DomainError(msg.str());
  }
  if (nu <= 1.0) return 0.0;
  const double up = 0.5 * (nu + 1.0);
  const double down = 0.5 * (nu - 1.0);
  return up * std::log2(up) + neg_xlog2x(down);
}

Bits two_pure_state_holevo(double p, double fidelity) {
  p = snap_unit_interval(p, "prior");
  fidelity = snap_unit_interval(fidelity, "fidelity");
  const double discriminant = 1.0 - 4.0 * p * (1.0 - p) * (1.0 - fidelity);
  const double top = 0.5 + 0.5 * std::sqrt(std::max(discriminant, 0.0));
  return binary_entropy(top);
}

Bits mixture_entropy_low_rank(std::span<const LowRankComponent> components) {
  if (components.empty()) throw DimensionError("mixture has no components");
  const Eigen::Index rows = components.front().vectors.rows();
  Eigen::Index columns = 0;
  double trace = 0.0;
  for (const auto& c : components) {
    if (c.vectors.rows() != rows) {
      throw DimensionError("mixture components live on different spaces");
    }
    if (c.eigenvalues.size() != c.vectors.cols()) {
      throw DimensionError("eigenvalue count does not match vector count");
    }
    if (c.weight < 0.0 || (c.eigenvalues.array() < kNegativeEigenvalueFloor).any()) {
      throw DomainError("mixture weights and eigenvalues must be non-negative");
    }
    columns += c.vectors.cols();
    trace += c.weight * c.eigenvalues.sum();
  }
  if (std::abs(trace - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "mixture trace is " << trace << ", expected 1";
    throw DomainError(msg.str());
  }

  Eigen::MatrixXcd scaled(rows, columns);
  Eigen::Index at = 0;
  for (const auto& c : components) {
    for (Eigen::Index k = 0; k < c.vectors.cols(); ++k) {
      const double w = std::sqrt(std::max(c.weight * c.eigenvalues(k), 0.0));
      scaled.col(at++) = w * c.vectors.col(k);
    }
  }
  return gram_entropy(scaled.adjoint() * scaled);
}

Spectrum hermitian_spectrum(const Eigen::MatrixXcd& matrix) {
  if (matrix.rows() != matrix.cols()) throw DimensionError("matrix is not square");
  if (matrix.rows() == 0) return Spectrum::from_eigenvalues({});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver did not converge");
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return Spectrum::from_eigenvalues(std::vector<double>(ev.data(), ev.data() + ev.size()));
}

Spectrum block_hermitian_spectrum(const Eigen::MatrixXcd& matrix) {
  if (matrix.rows() != matrix.cols()) throw DimensionError("matrix is not square");
  std::vector<double> eigenvalues;
  eigenvalues.reserve(static_cast<std::size_t>(matrix.rows()));
  for (const auto& block : coupled_blocks(matrix)) {
    const auto size = static_cast<Eigen::Index>(block.size());
    if (size == 1) {
      eigenvalues.push_back(matrix(block[0], block[0]).real());
      continue;
    }
    Eigen::MatrixXcd sub(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
      for (Eigen::Index j = 0; j < size; ++j) sub(i, j) = matrix(block[i], block[j]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("Hermitian eigensolver did not converge");
    }
    const Eigen::VectorXd& ev = solver.eigenvalues();
    eigenvalues.insert(eigenvalues.end(), ev.data(), ev.data() + ev.size());
  }
  return Spectrum::from_eigenvalues(std::move(eigenvalues));
}

Bits gram_entropy(const Eigen::MatrixXcd& gram) {
  return von_neumann_entropy(block_hermitian_spectrum(gram));
}

}  // namespace qreading::math
