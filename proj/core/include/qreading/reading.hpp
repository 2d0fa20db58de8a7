#pragma once

// Readout of optical memories whose cells encode one of two pure-loss
// channels. Closed-form bounds for classical and EPR transmitters sit next
// to numerical Holevo/Helstrom evaluators built on the Fock engine, so every
// formula can be checked against brute force.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qreading/core_math.hpp"
#include "qreading/fock.hpp"

namespace qreading {

using math::Bits;
using math::Probability;

// Binary marginal cell {kappa0 with prior p, kappa1 with prior 1-p}.
// kappa0 == kappa1 is allowed; such a cell carries no readable information.
class PureLossCell {
 public:
  PureLossCell(double kappa0, double kappa1, double prior0 = 0.5);

  double kappa0() const { return kappa0_; }
  double kappa1() const { return kappa1_; }
  double kappa(int channel) const { return channel == 0 ? kappa0_ : kappa1_; }
  Probability prior() const { return prior_; }
  bool degenerate() const { return kappa0_ == kappa1_; }

 private:
  double kappa0_;
  double kappa1_;
  Probability prior_;
};

// Signal modes through the cell, reference modes bypassing it, and the mean
// total photon number irradiated over the cell.
struct SignalProfile {
  int signal_modes = 1;
  int reference_modes = 0;
  double photons = 0.0;
};

struct CoherentProbe {};
struct EprProbe {
  int copies = 1;
};
struct NoonProbe {};
struct FockNumberProbe {};
struct SqueezedCoherentProbe {
  double splitting = 0.0;  // fraction of the photons spent on squeezing
};
using ProbeKind =
    std::variant<CoherentProbe, EprProbe, NoonProbe, FockNumberProbe, SqueezedCoherentProbe>;

class Transmitter {
 public:
  /// |sqrt(n)> on one signal mode.
  static Transmitter coherent(double n);
  /// `copies` TMSV pairs sharing n signal photons. With strict_energy the
  /// budget n also pays for the reference photons, so the signal gets n/2.
  static Transmitter epr(int copies, double n, bool strict_energy = false);
  /// (|2n,0> + |0,2n>)/sqrt(2); requires 2n to be a positive integer
  /// (n itself under strict_energy).
  static Transmitter noon(double n, bool strict_energy = false);
  /// |n> on one signal mode; requires a positive integer n.
  static Transmitter fock_number(double n);
  /// D(alpha)S(xi)|0> with sinh^2 xi = splitting * n and alpha^2 the rest.
  static Transmitter squeezed_coherent(double n, double splitting);

  const ProbeKind& kind() const { return kind_; }
  const SignalProfile& profile() const { return profile_; }
  double photons() const { return profile_.photons; }
  bool strict_energy() const { return strict_energy_; }
  int copies() const;

  /// Mean photons sent through the cell by one copy of the probe.
  double signal_photons_per_copy() const;
  std::string name() const;

 private:
  Transmitter(ProbeKind kind, SignalProfile profile, bool strict_energy)
      : kind_(kind), profile_(profile), strict_energy_(strict_energy) {}

  ProbeKind kind_;
  SignalProfile profile_;
  bool strict_energy_ = false;
};

// One copy of a probe as a Fock ket. Multi-copy transmitters are
// tensor powers of this state.
struct ProbeState {
  fock::FockKet ket;
  int signal_mode = 0;
  int copies = 1;
};

/// Builds one copy of the probe at the given cutoff. Throws CutoffError when
/// the truncation discards more than fock::kTailTolerance.
ProbeState probe_state(const Transmitter& t, fock::FockCutoff cutoff);

/// Smallest cutoff, starting from fock::default_cutoff and growing, at which
/// probe_state succeeds.
fock::FockCutoff transmitter_cutoff(const Transmitter& t);

struct EnsembleEntry {
  Probability prior;
  fock::FockDensityMatrix state;
};

class OutputEnsemble {
 public:
  explicit OutputEnsemble(std::vector<EnsembleEntry> entries);

  const std::vector<EnsembleEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<EnsembleEntry> entries_;
};

/// Pushes a transmitter through both channels of the cell (dense matrices).
OutputEnsemble output_ensemble(const PureLossCell& cell, const Transmitter& t,
                               std::optional<fock::FockCutoff> cutoff = std::nullopt);
/// Same for an arbitrary (possibly mixed) input; loss acts on signal_modes.
OutputEnsemble output_ensemble(const PureLossCell& cell, const fock::FockDensityMatrix& input,
                               std::span<const int> signal_modes);

Bits holevo_chi(const OutputEnsemble& ensemble);
/// (1 - ||p rho0 - (1-p) rho1||_1) / 2 for a two-state ensemble.
double helstrom_error(const OutputEnsemble& ensemble);

// ---- closed forms -------------------------------------------------------

/// Single-cell error of the best classical transmitter, equiprobable cell.
double classical_single_cell_error(const PureLossCell& cell, double n);
Bits classical_single_cell_info(const PureLossCell& cell, double n);
/// Holevo information of the optimal classical transmitter |sqrt(n)>.
Bits classical_reading_capacity(const PureLossCell& cell, double n);

double bhattacharyya_omega(const PureLossCell& cell);
/// exp(-omega n)/2, an upper bound on the EPR readout error.
double epr_bhattacharyya_bound(const PureLossCell& cell, double n);
/// Energy above which the bound above beats the classical error.
double threshold_energy(const PureLossCell& cell);
/// Threshold for ideal memories (one reflectivity equal to 1).
double ideal_threshold_energy(const PureLossCell& cell);

/// EPR error bound for an ideal memory with infinitely many TMSV copies.
double epr_theta_ideal(double kappa0, double n);
/// Same with s copies sharing n photons.
double epr_theta_finite(double kappa0, int s, double n);
/// 1 - H(Theta): single-cell bits guaranteed by s TMSV copies.
Bits epr_q_rate(double kappa0, int s, double n);
/// s -> infinity limit of epr_q_rate, i.e. 1 - H(theta).
Bits epr_q_rate_limit(double kappa0, double n);

Bits unconstrained_capacity(const PureLossCell& cell);
Bits mutual_info_single_cell(double p_err);

// ---- transmitter evaluation ---------------------------------------------

struct ChiEvaluation {
  Bits chi = 0.0;
  fock::FockCutoff cutoff{2};
};

/// Holevo information read by a transmitter, computed from Gram matrices of
/// the Kraus branches (never forming multimode density matrices). For EPR
/// transmitters each branch entropy is cross-checked against the Gaussian
/// engine; a mismatch above 1e-6 raises NumericalError.
ChiEvaluation evaluate_transmitter(const PureLossCell& cell, const Transmitter& t,
                                   std::optional<fock::FockCutoff> cutoff = std::nullopt);
Bits transmitter_chi(const PureLossCell& cell, const Transmitter& t,
                     std::optional<fock::FockCutoff> cutoff = std::nullopt);

/// Holevo information of copies of an arbitrary single-copy probe whose
/// `signal_mode` goes through the cell.
Bits probe_chi(const PureLossCell& cell, const fock::FockKet& probe, int signal_mode,
               int copies = 1);

struct SqueezedCoherentOptimum {
  double splitting = 0.0;
  Bits chi = 0.0;
  fock::FockCutoff cutoff{2};
};

/// Maximises chi of D(alpha)S(xi)|0> over alpha^2 + sinh^2 xi = n
/// (golden-section search on the squeezing fraction, 1e-6 tolerance).
SqueezedCoherentOptimum optimize_squeezed_coherent(
    const PureLossCell& cell, double n, std::optional<fock::FockCutoff> cutoff = std::nullopt);

/// chi of one TMSV pair minus the classical reading capacity.
Bits information_gain(const PureLossCell& cell, double n,
                      std::optional<fock::FockCutoff> cutoff = std::nullopt);

}  // namespace qreading
