#include "qreading/reading.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "qreading/error.hpp"
#include "qreading/gaussian.hpp"

namespace qreading {

namespace {

constexpr double kEnergyTolerance = 1e-6;
constexpr double kGaussianCrossCheckTolerance = 1e-6;
constexpr double kChiSlack = 1e-9;
constexpr double kIntegerSlack = 1e-9;
constexpr int kMaxCutoff = 2048;
// Rows of a dense mixture Gram matrix we are willing to diagonalise.
constexpr Eigen::Index kMaxDenseGram = 4096;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream msg;
    msg << what << " must lie in [0,1], got " << x;
    throw DomainError(msg.str());
  }
}

void check_photons(double n) {
  if (!(n >= 0.0) || !std::isfinite(n)) {
    std::ostringstream msg;
    msg << "mean photon number must be a finite non-negative number, got " << n;
    throw DomainError(msg.str());
  }
}

int require_integer(double x, const char* what) {
  const double rounded = std::round(x);
  if (std::abs(x - rounded) > kIntegerSlack || rounded < 1.0) {
    std::ostringstream msg;
    msg << what << " must be a positive integer, got " << x;
    throw DomainError(msg.str());
  }
  return static_cast<int>(rounded);
}

// Kronecker power A^{(x) copies}.
Eigen::MatrixXcd kron_power(const Eigen::MatrixXcd& a, int copies) {
  Eigen::MatrixXcd out = a;
  for (int c = 1; c < copies; ++c) {
    Eigen::MatrixXcd next(out.rows() * a.rows(), out.cols() * a.cols());
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      for (Eigen::Index i = 0; i < out.rows(); ++i) {
        next.block(i * a.rows(), j * a.cols(), a.rows(), a.cols()) = out(i, j) * a;
      }
    }
    out = std::move(next);
  }
  return out;
}

Eigen::VectorXcd kron_power(const Eigen::VectorXcd& v, int copies) {
  Eigen::VectorXcd out = v;
  for (int c = 1; c < copies; ++c) {
    Eigen::VectorXcd next(out.size() * v.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) next.segment(i * v.size(), v.size()) = out(i) * v;
    out = std::move(next);
  }
  return out;
}

bool is_diagonal(const Eigen::MatrixXcd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != fock::Complex(0.0, 0.0)) return false;
    }
  }
  return true;
}

// Entropy of p (G00)^c (+) q (G11)^c with cross block sqrt(pq) (G01)^c, where
// the blocks are the single-copy Kraus-branch overlaps of the two outputs.
Bits mixture_entropy(double p, const Eigen::MatrixXcd& g00, const Eigen::MatrixXcd& g01,
                     const Eigen::MatrixXcd& g11, int copies) {
  const double q = 1.0 - p;
  const double cross = std::sqrt(p * q);
  if (is_diagonal(g00) && is_diagonal(g01) && is_diagonal(g11)) {
    // Every copy index decouples into a 2x2 block.
    const Eigen::VectorXcd a = kron_power(Eigen::VectorXcd(g00.diagonal()), copies);
    const Eigen::VectorXcd b = kron_power(Eigen::VectorXcd(g01.diagonal()), copies);
    const Eigen::VectorXcd c = kron_power(Eigen::VectorXcd(g11.diagonal()), copies);
    std::vector<double> eigenvalues;
    eigenvalues.reserve(static_cast<std::size_t>(2 * a.size()));
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double x = p * a(i).real();
      const double z = q * c(i).real();
      const double y2 = cross * cross * std::norm(b(i));
      const double half = 0.5 * (x + z);
      const double gap = std::sqrt(0.25 * (x - z) * (x - z) + y2);
      const double large = half + gap;
      const double det = x * z - y2;
      eigenvalues.push_back(large);
      eigenvalues.push_back(large > 0.0 ? det / large : 0.0);
    }
    return math::von_neumann_entropy(math::Spectrum::from_eigenvalues(std::move(eigenvalues)));
  }

  const Eigen::MatrixXcd b00 = kron_power(g00, copies);
  const Eigen::MatrixXcd b01 = kron_power(g01, copies);
  const Eigen::MatrixXcd b11 = kron_power(g11, copies);
  const Eigen::Index n = b00.rows();
  if (2 * n > kMaxDenseGram) {
    std::ostringstream msg;
    msg << "mixture Gram matrix of size " << 2 * n << " exceeds the supported " << kMaxDenseGram;
    throw DimensionError(msg.str());
  }
  Eigen::MatrixXcd gram(2 * n, 2 * n);
  gram.topLeftCorner(n, n) = p * b00;
  gram.topRightCorner(n, n) = cross * b01;
  gram.bottomLeftCorner(n, n) = cross * b01.adjoint();
  gram.bottomRightCorner(n, n) = q * b11;
  return math::gram_entropy(gram);
}

Bits clamp_chi(Bits chi, double prior_entropy) {
  if (chi < -kChiSlack || chi > prior_entropy + kChiSlack) {
    std::ostringstream msg;
    msg << "Holevo information " << chi << " outside [0, " << prior_entropy << "]";
    throw NumericalError(msg.str());
  }
  return std::clamp(chi, 0.0, prior_entropy);
}

struct ProbeChi {
  Bits chi = 0.0;
  std::array<Bits, 2> branch_entropy{};  // single-copy S(rho_u)
};

ProbeChi probe_chi_impl(const PureLossCell& cell, const fock::FockKet& probe, int signal_mode,
                        int copies) {
  if (copies < 1) throw DomainError("number of copies must be positive");
  const double p = cell.prior().value();
  const Eigen::MatrixXcd reduced = fock::reduced_single_mode(probe, signal_mode);
  const Eigen::MatrixXcd g00 = fock::loss_overlap_gram(reduced, cell.kappa0(), cell.kappa0());
  const Eigen::MatrixXcd g01 = fock::loss_overlap_gram(reduced, cell.kappa0(), cell.kappa1());
  const Eigen::MatrixXcd g11 = fock::loss_overlap_gram(reduced, cell.kappa1(), cell.kappa1());

  ProbeChi out;
  out.branch_entropy = {math::gram_entropy(g00), math::gram_entropy(g11)};
  const Bits mixed = mixture_entropy(p, g00, g01, g11, copies);
  const Bits average = copies * (p * out.branch_entropy[0] + (1.0 - p) * out.branch_entropy[1]);
  out.chi = clamp_chi(mixed - average, math::binary_entropy(p));
  return out;
}

ProbeState resolve_probe(const Transmitter& t, std::optional<fock::FockCutoff> cutoff) {
  if (cutoff) return probe_state(t, *cutoff);
  const double per_mode =
      std::holds_alternative<NoonProbe>(t.kind()) ? 2.0 * t.signal_photons_per_copy()
                                                  : t.signal_photons_per_copy();
  int dim = fock::default_cutoff(per_mode).dim();
  while (true) {
    try {
      return probe_state(t, fock::FockCutoff(dim));
    } catch (const CutoffError&) {
      if (dim >= kMaxCutoff) throw;
      dim = std::min(kMaxCutoff, dim + std::max(4, dim / 4));
    }
  }
}

}  // namespace

PureLossCell::PureLossCell(double kappa0, double kappa1, double prior0)
    : kappa0_(kappa0), kappa1_(kappa1), prior_(prior0) {
  check_unit(kappa0, "kappa0");
  check_unit(kappa1, "kappa1");
}

Transmitter Transmitter::coherent(double n) {
  check_photons(n);
  return Transmitter(CoherentProbe{}, {1, 0, n}, false);
}

Transmitter Transmitter::epr(int copies, double n, bool strict_energy) {
  check_photons(n);
  if (copies != 1 && copies != 2) throw DomainError("EPR transmitters use 1 or 2 TMSV copies");
  return Transmitter(EprProbe{copies}, {copies, copies, n}, strict_energy);
}

Transmitter Transmitter::noon(double n, bool strict_energy) {
  check_photons(n);
  require_integer(strict_energy ? n : 2.0 * n, "NOON photon number N");
  return Transmitter(NoonProbe{}, {1, 1, n}, strict_energy);
}

Transmitter Transmitter::fock_number(double n) {
  check_photons(n);
  require_integer(n, "Fock transmitter photon number");
  return Transmitter(FockNumberProbe{}, {1, 0, n}, false);
}

Transmitter Transmitter::squeezed_coherent(double n, double splitting) {
  check_photons(n);
  check_unit(splitting, "squeezing fraction");
  return Transmitter(SqueezedCoherentProbe{splitting}, {1, 0, n}, false);
}

int Transmitter::copies() const {
  if (const auto* epr = std::get_if<EprProbe>(&kind_)) return epr->copies;
  return 1;
}

double Transmitter::signal_photons_per_copy() const {
  const double budget = strict_energy_ ? 0.5 * profile_.photons : profile_.photons;
  return budget / copies();
}

std::string Transmitter::name() const {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const CoherentProbe&) { out << "coherent"; },
                 [&](const EprProbe& e) { out << "epr" << e.copies; },
                 [&](const NoonProbe&) { out << "noon"; },
                 [&](const FockNumberProbe&) { out << "fock"; },
                 [&](const SqueezedCoherentProbe& s) {
                   out << "squeezed-coherent(" << s.splitting << ")";
                 },
             },
             kind_);
  if (strict_energy_) out << "-strict";
  return out.str();
}

ProbeState probe_state(const Transmitter& t, fock::FockCutoff cutoff) {
  const double signal = t.signal_photons_per_copy();
  fock::FockKet ket = std::visit(
      overloaded{
          [&](const CoherentProbe&) { return fock::coherent_ket(std::sqrt(signal), cutoff); },
          [&](const EprProbe&) {
            return fock::tmsv_ket(gaussian::SqueezeParam::from_mean_photons(signal), cutoff);
          },
          [&](const NoonProbe&) {
            return fock::noon_ket(require_integer(2.0 * signal, "NOON photon number N"), cutoff);
          },
          [&](const FockNumberProbe&) {
            return fock::fock_ket(require_integer(signal, "Fock photon number"), cutoff);
          },
          [&](const SqueezedCoherentProbe& s) {
            const double squeezed = s.splitting * signal;
            const double xi = std::asinh(std::sqrt(squeezed));
            const double alpha = std::sqrt(std::max(signal - squeezed, 0.0));
            return fock::squeezed_coherent_ket(alpha, xi, cutoff);
          },
      },
      t.kind());

  const std::array<int, 1> signal_modes{0};
  const double energy = fock::mean_photon_number(ket, signal_modes);
  if (std::abs(energy - signal) > kEnergyTolerance) {
    std::ostringstream msg;
    msg << t.name() << " probe carries " << energy << " signal photons, expected " << signal;
    throw NumericalError(msg.str());
  }
  return ProbeState{std::move(ket), 0, t.copies()};
}

fock::FockCutoff transmitter_cutoff(const Transmitter& t) {
  return resolve_probe(t, std::nullopt).ket.cutoff();
}

OutputEnsemble::OutputEnsemble(std::vector<EnsembleEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) throw DimensionError("ensemble has no entries");
  double total = 0.0;
  for (const auto& e : entries_) {
    total += e.prior.value();
    if (e.state.modes() != entries_.front().state.modes() ||
        e.state.cutoff() != entries_.front().state.cutoff()) {
      throw DimensionError("ensemble states live on different spaces");
    }
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "ensemble priors sum to " << total;
    throw DomainError(msg.str());
  }
}

OutputEnsemble output_ensemble(const PureLossCell& cell, const Transmitter& t,
                               std::optional<fock::FockCutoff> cutoff) {
  const ProbeState probe = resolve_probe(t, cutoff);
  const fock::FockDensityMatrix single = fock::FockDensityMatrix::from_ket(probe.ket);
  fock::FockDensityMatrix input = single;
  std::vector<int> signal_modes{probe.signal_mode};
  for (int c = 1; c < probe.copies; ++c) {
    input = fock::tensor(input, single);
    signal_modes.push_back(c * probe.ket.modes() + probe.signal_mode);
  }
  return output_ensemble(cell, input, signal_modes);
}

OutputEnsemble output_ensemble(const PureLossCell& cell, const fock::FockDensityMatrix& input,
                               std::span<const int> signal_modes) {
  std::vector<EnsembleEntry> entries;
  for (int u = 0; u < 2; ++u) {
    fock::FockDensityMatrix out = input;
    for (int mode : signal_modes) out = fock::loss_channel(out, mode, cell.kappa(u));
    const Probability prior = u == 0 ? cell.prior() : cell.prior().complement();
    entries.push_back(EnsembleEntry{prior, std::move(out)});
  }
  return OutputEnsemble(std::move(entries));
}

Bits holevo_chi(const OutputEnsemble& ensemble) {
  const auto& entries = ensemble.entries();
  Eigen::MatrixXcd average = Eigen::MatrixXcd::Zero(entries.front().state.size(),
                                                    entries.front().state.size());
  double conditional = 0.0;
  double prior_entropy = 0.0;
  for (const auto& e : entries) {
    const double p = e.prior.value();
    if (p == 0.0) continue;
    average += p * e.state.matrix();
    conditional += p * fock::entropy(e.state);
    prior_entropy -= p * std::log2(p);
  }
  const Bits mixed = math::von_neumann_entropy(math::hermitian_spectrum(average));
  return clamp_chi(mixed - conditional, prior_entropy);
}

double helstrom_error(const OutputEnsemble& ensemble) {
  if (ensemble.size() != 2) throw DimensionError("Helstrom error needs exactly two states");
  const auto& e0 = ensemble.entries()[0];
  const auto& e1 = ensemble.entries()[1];
  const double p = e0.prior.value();
  const double q = e1.prior.value();
  const Eigen::MatrixXcd diff = p * e0.state.matrix() - q * e1.state.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(diff, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("eigensolver failed in Helstrom error");
  const double norm = eig.eigenvalues().cwiseAbs().sum();
  return std::clamp(0.5 * (1.0 - norm), 0.0, std::min(p, q));
}

double classical_single_cell_error(const PureLossCell& cell, double n) {
  check_photons(n);
  const double gap = std::sqrt(cell.kappa0()) - std::sqrt(cell.kappa1());
  const double overlap = std::exp(-n * gap * gap);
  // Rationalised so that tiny overlaps do not cancel to zero.
  return 0.5 * overlap / (1.0 + std::sqrt(1.0 - overlap));
}

Bits classical_single_cell_info(const PureLossCell& cell, double n) {
  return mutual_info_single_cell(classical_single_cell_error(cell, n));
}

Bits classical_reading_capacity(const PureLossCell& cell, double n) {
  check_photons(n);
  const double gap = std::sqrt(cell.kappa1()) - std::sqrt(cell.kappa0());
  return math::two_pure_state_holevo(cell.prior().value(), std::exp(-n * gap * gap));
}

double bhattacharyya_omega(const PureLossCell& cell) {
  if (cell.degenerate()) return 0.0;
  const double k0 = cell.kappa0();
  const double k1 = cell.kappa1();
  const double omega = 0.5 * (k0 + k1 + 2.0) - 2.0 * std::sqrt(k0 * k1) -
                       std::sqrt((1.0 - k0) * (1.0 - k1));
  return std::max(omega, 0.0);
}

double epr_bhattacharyya_bound(const PureLossCell& cell, double n) {
  check_photons(n);
  return 0.5 * std::exp(-bhattacharyya_omega(cell) * n);
}

double threshold_energy(const PureLossCell& cell) {
  const double k0 = cell.kappa0();
  const double k1 = cell.kappa1();
  const double denominator = 2.0 - k0 - k1 - 2.0 * std::sqrt((1.0 - k0) * (1.0 - k1));
  if (!(denominator > 1e-12)) {
    throw DomainError("threshold energy is undefined for a cell with equal reflectivities");
  }
  return 2.0 * std::log(2.0) / denominator;
}

double ideal_threshold_energy(const PureLossCell& cell) {
  const double high = std::max(cell.kappa0(), cell.kappa1());
  const double low = std::min(cell.kappa0(), cell.kappa1());
  if (high != 1.0 || low >= 1.0) {
    throw DomainError("ideal-memory threshold needs one reflectivity equal to 1 and the other below");
  }
  return 0.5;
}

double epr_theta_ideal(double kappa0, double n) {
  check_unit(kappa0, "kappa0");
  check_photons(n);
  return 0.5 * std::exp(-2.0 * n * (1.0 - std::sqrt(kappa0)));
}

double epr_theta_finite(double kappa0, int s, double n) {
  check_unit(kappa0, "kappa0");
  check_photons(n);
  if (s < 1) throw DomainError("number of TMSV copies must be positive");
  const double x = n / s * (1.0 - std::sqrt(kappa0));
  return 0.5 * std::exp(-2.0 * s * std::log1p(x));
}

Bits epr_q_rate(double kappa0, int s, double n) {
  return 1.0 - math::binary_entropy(epr_theta_finite(kappa0, s, n));
}

Bits epr_q_rate_limit(double kappa0, double n) {
  return 1.0 - math::binary_entropy(epr_theta_ideal(kappa0, n));
}

Bits unconstrained_capacity(const PureLossCell& cell) {
  return math::binary_entropy(cell.prior().value());
}

Bits mutual_info_single_cell(double p_err) { return 1.0 - math::binary_entropy(p_err); }

ChiEvaluation evaluate_transmitter(const PureLossCell& cell, const Transmitter& t,
                                   std::optional<fock::FockCutoff> cutoff) {
  const double p = cell.prior().value();
  if (t.photons() == 0.0 || cell.degenerate() || p == 0.0 || p == 1.0) {
    // Both outputs coincide (or one is never written): nothing to read.
    return ChiEvaluation{0.0, cutoff.value_or(fock::default_cutoff(t.signal_photons_per_copy()))};
  }
  const ProbeState probe = resolve_probe(t, cutoff);
  const ProbeChi result = probe_chi_impl(cell, probe.ket, probe.signal_mode, probe.copies);

  if (std::holds_alternative<EprProbe>(t.kind())) {
    const gaussian::GaussianState pair =
        gaussian::tmsv(gaussian::SqueezeParam::from_mean_photons(t.signal_photons_per_copy()));
    for (int u = 0; u < 2; ++u) {
      const Bits reference = gaussian::gaussian_entropy(gaussian::apply_pure_loss(pair, 0, cell.kappa(u)));
      if (std::abs(reference - result.branch_entropy[u]) > kGaussianCrossCheckTolerance) {
        std::ostringstream msg;
        msg << "Fock and Gaussian entropies of the lossy TMSV disagree: "
            << result.branch_entropy[u] << " vs " << reference << " (cutoff "
            << probe.ket.dim() << ")";
        throw NumericalError(msg.str());
      }
    }
  }
  return ChiEvaluation{result.chi, probe.ket.cutoff()};
}

Bits transmitter_chi(const PureLossCell& cell, const Transmitter& t,
                     std::optional<fock::FockCutoff> cutoff) {
  return evaluate_transmitter(cell, t, cutoff).chi;
}

Bits probe_chi(const PureLossCell& cell, const fock::FockKet& probe, int signal_mode,
               int copies) {
  return probe_chi_impl(cell, probe, signal_mode, copies).chi;
}

SqueezedCoherentOptimum optimize_squeezed_coherent(const PureLossCell& cell, double n,
                                                   std::optional<fock::FockCutoff> cutoff) {
  check_photons(n);
  if (n == 0.0) throw DomainError("squeezed-coherent optimisation needs n > 0");

  SqueezedCoherentOptimum best;
  best.cutoff = cutoff.value_or(fock::default_cutoff(n));
  bool have_best = false;
  auto evaluate = [&](double splitting) {
    const ChiEvaluation e =
        evaluate_transmitter(cell, Transmitter::squeezed_coherent(n, splitting), cutoff);
    if (e.cutoff > best.cutoff) best.cutoff = e.cutoff;
    if (!have_best || e.chi > best.chi) {
      best.chi = e.chi;
      best.splitting = splitting;
      have_best = true;
    }
    return e.chi;
  };

  // Coarse scan to bracket the maximum (also covers both endpoints).
  constexpr int kScan = 10;
  int best_index = 0;
  double best_scan = -1.0;
  for (int i = 0; i <= kScan; ++i) {
    const double value = evaluate(static_cast<double>(i) / kScan);
    if (value > best_scan) {
      best_scan = value;
      best_index = i;
    }
  }
  double lo = std::max(0, best_index - 1) / static_cast<double>(kScan);
  double hi = std::min(kScan, best_index + 1) / static_cast<double>(kScan);

  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = evaluate(x1);
  double f2 = evaluate(x2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = evaluate(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = evaluate(x1);
    }
  }
  evaluate(0.5 * (lo + hi));
  return best;
}

Bits information_gain(const PureLossCell& cell, double n, std::optional<fock::FockCutoff> cutoff) {
  return transmitter_chi(cell, Transmitter::epr(1, n), cutoff) - classical_reading_capacity(cell, n);
}

}  // namespace qreading
