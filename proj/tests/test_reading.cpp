#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qreading/error.hpp"
#include "qreading/gaussian.hpp"
#include "qreading/reading.hpp"
#include "test_support.hpp"

using namespace qreading;

namespace {

constexpr std::array<int, 1> kSignal{0};

std::vector<double> tenths() {
  std::vector<double> v;
  for (int i = 0; i <= 10; ++i) v.push_back(i / 10.0);
  return v;
}

double coherent_fidelity(double k0, double k1, double n) {
  const double d = std::sqrt(k0) - std::sqrt(k1);
  return std::exp(-n * d * d);
}

}  // namespace

TEST(PureLossCell, Validates) {
  EXPECT_THROW(PureLossCell(-0.1, 0.5), DomainError);
  EXPECT_THROW(PureLossCell(0.1, 1.5), DomainError);
  EXPECT_THROW(PureLossCell(0.1, 0.5, 2.0), DomainError);
  EXPECT_TRUE(PureLossCell(0.3, 0.3).degenerate());
  EXPECT_EQ(PureLossCell(0.2, 0.7).kappa(1), 0.7);
}

TEST(Transmitter, Validates) {
  EXPECT_THROW(Transmitter::coherent(-1.0), DomainError);
  EXPECT_THROW(Transmitter::epr(3, 1.0), DomainError);
  EXPECT_THROW(Transmitter::noon(0.3), DomainError);
  EXPECT_THROW(Transmitter::fock_number(1.5), DomainError);
  EXPECT_THROW(Transmitter::squeezed_coherent(1.0, 1.5), DomainError);
  EXPECT_NO_THROW(Transmitter::noon(1.5));
  EXPECT_EQ(Transmitter::epr(2, 1.0).copies(), 2);
  EXPECT_DOUBLE_EQ(Transmitter::epr(2, 1.0).signal_photons_per_copy(), 0.5);
  EXPECT_DOUBLE_EQ(Transmitter::epr(1, 1.0, true).signal_photons_per_copy(), 0.5);
  EXPECT_DOUBLE_EQ(Transmitter::noon(2.0, true).signal_photons_per_copy(), 1.0);
}

TEST(Transmitter, EnergyAccounting) {
  const std::vector<Transmitter> all{
      Transmitter::coherent(1.7),         Transmitter::epr(1, 1.3),
      Transmitter::epr(2, 1.3),           Transmitter::epr(1, 2.0, true),
      Transmitter::noon(1.5),             Transmitter::noon(2.0, true),
      Transmitter::fock_number(3.0),      Transmitter::squeezed_coherent(1.2, 0.4)};
  for (const Transmitter& t : all) {
    const ProbeState probe = probe_state(t, transmitter_cutoff(t));
    const double per_copy = fock::mean_photon_number(probe.ket, kSignal);
    EXPECT_NEAR(per_copy * probe.copies, t.strict_energy() ? t.photons() / 2 : t.photons(), 1e-6)
        << t.name();
    if (t.strict_energy()) {
      const std::array<int, 2> both{0, 1};
      EXPECT_NEAR(fock::mean_photon_number(probe.ket, both), t.photons(), 1e-6) << t.name();
    }
  }
}

TEST(OutputEnsemble, Examples) {
  const PureLossCell cell(0.25, 1.0);
  const OutputEnsemble coh = output_ensemble(cell, Transmitter::coherent(1.0));
  const fock::FockCutoff d = coh.entries()[0].state.cutoff();
  EXPECT_NEAR(fock::fidelity(coh.entries()[0].state, fock::FockDensityMatrix::from_ket(fock::coherent_ket(0.5, d))),
              1.0, 1e-8);
  EXPECT_NEAR(fock::fidelity(coh.entries()[1].state, fock::FockDensityMatrix::from_ket(fock::coherent_ket(1.0, d))),
              1.0, 1e-8);

  const Transmitter epr = Transmitter::epr(1, 0.5);
  const OutputEnsemble e = output_ensemble(cell, epr);
  const auto pure = fock::FockDensityMatrix::from_ket(probe_state(epr, e.entries()[1].state.cutoff()).ket);
  EXPECT_LT((e.entries()[1].state.matrix() - pure.matrix()).cwiseAbs().maxCoeff(), 1e-14);

  const OutputEnsemble f = output_ensemble(PureLossCell(0.4, 0.9), Transmitter::fock_number(1.0));
  EXPECT_NEAR(f.entries()[0].state.matrix()(1, 1).real(), 0.4, 1e-14);
  EXPECT_NEAR(f.entries()[0].state.matrix()(0, 0).real(), 0.6, 1e-14);
  EXPECT_NEAR(f.entries()[1].state.matrix()(1, 1).real(), 0.9, 1e-14);
}

TEST(HolevoChi, Examples) {
  const fock::FockCutoff d(4);
  const auto zero = fock::FockDensityMatrix::from_ket(fock::fock_ket(0, d));
  const auto one = fock::FockDensityMatrix::from_ket(fock::fock_ket(1, d));
  EXPECT_NEAR(holevo_chi(OutputEnsemble({{Probability(0.5), zero}, {Probability(0.5), zero}})), 0.0, 1e-14);
  EXPECT_NEAR(holevo_chi(OutputEnsemble({{Probability(0.5), zero}, {Probability(0.5), one}})), 1.0, 1e-14);
  for (double p : {0.1, 0.5, 0.8}) {
    const PureLossCell cell(0.2, 0.9, p);
    EXPECT_NEAR(holevo_chi(output_ensemble(cell, Transmitter::coherent(2.0))),
                math::two_pure_state_holevo(p, coherent_fidelity(0.2, 0.9, 2.0)), 1e-8);
  }
  EXPECT_THROW(OutputEnsemble({{Probability(0.5), zero}, {Probability(0.4), one}}), DomainError);
}

TEST(HelstromError, Examples) {
  const fock::FockCutoff d(4);
  const auto zero = fock::FockDensityMatrix::from_ket(fock::fock_ket(0, d));
  const auto one = fock::FockDensityMatrix::from_ket(fock::fock_ket(1, d));
  EXPECT_NEAR(helstrom_error(OutputEnsemble({{Probability(0.5), zero}, {Probability(0.5), zero}})), 0.5, 1e-14);
  EXPECT_NEAR(helstrom_error(OutputEnsemble({{Probability(0.5), zero}, {Probability(0.5), one}})), 0.0, 1e-14);
  EXPECT_NEAR(helstrom_error(output_ensemble(PureLossCell(0.25, 1.0), Transmitter::coherent(1.0))),
              oracle::kPcQuarterOneN1, 1e-8);
  EXPECT_THROW(helstrom_error(OutputEnsemble({{Probability(1.0), zero}})), DimensionError);
}

TEST(ClosedForms, ClassicalError) {
  EXPECT_EQ(classical_single_cell_error(PureLossCell(0.4, 0.4), 3.0), 0.5);
  EXPECT_EQ(classical_single_cell_error(PureLossCell(0.1, 0.9), 0.0), 0.5);
  EXPECT_NEAR(classical_single_cell_error(PureLossCell(0.25, 1.0), 1.0), oracle::kPcQuarterOneN1, 1e-15);
  // Equiprobable convention regardless of the cell prior.
  EXPECT_EQ(classical_single_cell_error(PureLossCell(0.25, 1.0, 0.1), 1.0),
            classical_single_cell_error(PureLossCell(0.25, 1.0), 1.0));
  double previous = 0.5;
  for (int i = 1; i <= 50; ++i) {
    const double pc = classical_single_cell_error(PureLossCell(0.3, 0.8), 0.2 * i);
    EXPECT_LT(pc, previous);
    EXPECT_GT(pc, 0.0);
    previous = pc;
  }
}

TEST(ClosedForms, ClassicalInfoAndCapacity) {
  EXPECT_EQ(classical_single_cell_info(PureLossCell(0.5, 0.9), 0.0), 0.0);
  EXPECT_NEAR(classical_single_cell_info(PureLossCell(0.5, 0.9), 5.0), oracle::kIcHalfPoint9N5, 1e-14);
  EXPECT_NEAR(classical_single_cell_info(PureLossCell(0.0, 1.0), 60.0), 1.0, 1e-12);
  EXPECT_NEAR(classical_reading_capacity(PureLossCell(0.5, 0.9), 5.0), oracle::kCcHalfPoint9N5, 1e-14);
  EXPECT_EQ(classical_reading_capacity(PureLossCell(0.5, 0.9, 0.0), 5.0), 0.0);
  EXPECT_NEAR(classical_reading_capacity(PureLossCell(0.0, 1.0), 60.0), 1.0, 1e-12);
  EXPECT_EQ(classical_reading_capacity(PureLossCell(0.3, 0.3), 1.0), 0.0);
  EXPECT_NEAR(mutual_info_single_cell(oracle::kPcQuarterOneN1), oracle::kIcQuarterOneN1, 1e-14);
  EXPECT_EQ(mutual_info_single_cell(0.5), 0.0);
  EXPECT_EQ(mutual_info_single_cell(0.0), 1.0);
}

TEST(ClosedForms, CapacityDominatesSingleCellInfoAndIsConcave) {
  const std::vector<double> ns{0.5, 1.0, 2.0, 5.0};
  for (double k0 : tenths()) {
    for (double k1 : tenths()) {
      const PureLossCell cell(k0, k1);
      for (double n : ns) {
        EXPECT_GE(classical_reading_capacity(cell, n), classical_single_cell_info(cell, n) - 1e-15);
      }
      for (int i = 0; i < 20; ++i) {
        const double n1 = 0.37 * i;
        const double n2 = 0.91 * i + 0.2;
        EXPECT_GE(classical_reading_capacity(cell, 0.5 * (n1 + n2)),
                  0.5 * (classical_reading_capacity(cell, n1) + classical_reading_capacity(cell, n2)) - 1e-10);
      }
    }
  }
}

TEST(ClosedForms, Bhattacharyya) {
  EXPECT_EQ(bhattacharyya_omega(PureLossCell(0.37, 0.37)), 0.0);
  EXPECT_NEAR(bhattacharyya_omega(PureLossCell(0.0, 1.0)), 1.5, 1e-15);
  EXPECT_NEAR(bhattacharyya_omega(PureLossCell(0.5, 0.9)), oracle::kOmegaHalfPoint9, 1e-15);
  for (double k0 : tenths()) {
    for (double k1 : tenths()) {
      if (k0 != k1) EXPECT_GT(bhattacharyya_omega(PureLossCell(k0, k1)), 0.0);
    }
  }
  EXPECT_EQ(epr_bhattacharyya_bound(PureLossCell(0.1, 0.8), 0.0), 0.5);
  EXPECT_EQ(epr_bhattacharyya_bound(PureLossCell(0.6, 0.6), 7.0), 0.5);
  EXPECT_NEAR(epr_bhattacharyya_bound(PureLossCell(0.0, 1.0), 1.0), oracle::kBoundZeroOneN1, 1e-15);
}

TEST(ClosedForms, ThresholdEnergy) {
  EXPECT_NEAR(threshold_energy(PureLossCell(0.0, 1.0)), oracle::kNthZeroOne, 1e-14);
  EXPECT_NEAR(threshold_energy(PureLossCell(0.5, 1.0)), oracle::kNthHalfOne, 1e-14);
  EXPECT_THROW(threshold_energy(PureLossCell(0.4, 0.4)), DomainError);
  EXPECT_EQ(ideal_threshold_energy(PureLossCell(0.2, 1.0)), 0.5);
  EXPECT_THROW(ideal_threshold_energy(PureLossCell(0.2, 0.9)), DomainError);
}

TEST(ClosedForms, BoundBeatsClassicalAboveThreshold) {
  for (double k0 : tenths()) {
    for (double k1 : tenths()) {
      if (k0 == k1) continue;
      const PureLossCell cell(k0, k1);
      const double n = 1.01 * threshold_energy(cell);
      EXPECT_LT(epr_bhattacharyya_bound(cell, n), classical_single_cell_error(cell, n)) << k0 << " " << k1;
    }
  }
}

TEST(ClosedForms, IdealMemoryThreshold) {
  for (double k0 : {0.0, 0.2, 0.4, 0.6, 0.8}) {
    for (double n : {0.51, 0.6, 1.0, 2.0}) {
      EXPECT_LT(epr_theta_ideal(k0, n), classical_single_cell_error(PureLossCell(k0, 1.0), n)) << k0 << " " << n;
    }
  }
}

TEST(ClosedForms, Theta) {
  EXPECT_EQ(epr_theta_ideal(0.3, 0.0), 0.5);
  EXPECT_EQ(epr_theta_ideal(1.0, 4.0), 0.5);
  EXPECT_NEAR(epr_theta_ideal(0.0, 1.0), oracle::kThetaZeroN1, 1e-15);
  EXPECT_NEAR(epr_theta_finite(0.0, 1, 1.0), 0.125, 1e-15);
  EXPECT_EQ(epr_theta_finite(0.4, 7, 0.0), 0.5);
  EXPECT_NEAR(epr_theta_finite(0.0, 1000000, 1.0), oracle::kThetaZeroN1, 1e-5);
  EXPECT_THROW(epr_theta_finite(0.0, 0, 1.0), DomainError);
  EXPECT_NEAR(epr_q_rate(0.0, 1, 1.0), oracle::kQZeroS1N1, 1e-14);
  EXPECT_EQ(epr_q_rate(0.5, 3, 0.0), 0.0);
}

TEST(ClosedForms, QIncreasesWithCopies) {
  for (double k0 : {0.0, 0.3, 0.6}) {
    for (double n : {1.0, 5.0}) {
      for (int s = 1; s < 64; ++s) {
        EXPECT_GT(epr_q_rate(k0, s + 1, n), epr_q_rate(k0, s, n)) << k0 << " " << n << " " << s;
        EXPECT_LT(epr_theta_finite(k0, s + 1, n), epr_theta_finite(k0, s, n));
      }
      EXPECT_LT(epr_q_rate(k0, 64, n), epr_q_rate_limit(k0, n));
    }
  }
}

TEST(ClosedForms, Unconstrained) {
  EXPECT_EQ(unconstrained_capacity(PureLossCell(0.1, 0.2)), 1.0);
  EXPECT_EQ(unconstrained_capacity(PureLossCell(0.1, 0.2, 0.0)), 0.0);
  EXPECT_NEAR(unconstrained_capacity(PureLossCell(0.1, 0.2, 0.25)), oracle::kH025, 1e-14);
}

TEST(TransmitterChi, CoherentEqualsCapacity) {
  for (double p : {0.1, 0.5}) {
    for (double n : {0.3, 2.0, 7.0}) {
      const PureLossCell cell(0.15, 0.85, p);
      EXPECT_NEAR(transmitter_chi(cell, Transmitter::coherent(n)), classical_reading_capacity(cell, n), 1e-8);
    }
  }
}

TEST(TransmitterChi, MatchesDenseOracle) {
  EXPECT_NEAR(transmitter_chi(PureLossCell(0.5, 1.0), Transmitter::epr(1, 1.0)), oracle::kChiEprHalfOneN1, 1e-9);
  EXPECT_NEAR(transmitter_chi(PureLossCell(0.2, 0.7, 0.3), Transmitter::epr(1, 1.0)),
              oracle::kChiEprPoint2Point7Prior3N1, 1e-9);
  EXPECT_NEAR(transmitter_chi(PureLossCell(0.0, 1.0), Transmitter::epr(1, 1.0)), oracle::kChiEprZeroOneN1, 1e-9);
  EXPECT_NEAR(transmitter_chi(PureLossCell(0.5, 1.0), Transmitter::noon(1.0)), oracle::kChiNoonHalfOneN1, 1e-9);
  EXPECT_NEAR(transmitter_chi(PureLossCell(0.3, 0.8), Transmitter::noon(1.5)), oracle::kChiNoonPoint3Point8N15,
              1e-9);
  EXPECT_NEAR(transmitter_chi(PureLossCell(0.5, 1.0), Transmitter::fock_number(1.0)), oracle::kChiFockHalfOneN1,
              1e-12);
  EXPECT_NEAR(transmitter_chi(PureLossCell(0.0, 0.5), Transmitter::squeezed_coherent(1.0, 0.36)),
              oracle::kChiSqcZeroHalfN1, 1e-8);
  EXPECT_NEAR(transmitter_chi(PureLossCell(0.2, 0.9), Transmitter::squeezed_coherent(2.0, 0.5)),
              oracle::kChiSqcPoint2Point9N2, 1e-8);
}

// The Gram-matrix evaluator against the dense output ensemble.
TEST(TransmitterChi, GramPathMatchesDensePath) {
  const std::vector<Transmitter> all{Transmitter::coherent(1.0), Transmitter::epr(1, 0.3),
                                     Transmitter::noon(1.0),     Transmitter::fock_number(2.0),
                                     Transmitter::squeezed_coherent(0.8, 0.5)};
  for (const Transmitter& t : all) {
    for (const PureLossCell& cell : {PureLossCell(0.1, 0.6), PureLossCell(0.3, 1.0, 0.3)}) {
      EXPECT_NEAR(transmitter_chi(cell, t), holevo_chi(output_ensemble(cell, t)), 1e-9) << t.name();
    }
  }
}

TEST(ProbeChi, TwoCopiesMatchDenseTensorProduct) {
  std::mt19937_64 rng(41);
  const fock::FockCutoff d(4);
  for (int trial = 0; trial < 5; ++trial) {
    const fock::FockKet psi(2, d, test::random_unit_vector(16, rng));
    const PureLossCell cell(0.1 * trial, 0.95, 0.4);
    const auto rho = fock::FockDensityMatrix::from_ket(psi);
    const std::array<int, 2> signals{0, 2};
    const double dense = holevo_chi(output_ensemble(cell, fock::tensor(rho, rho), signals));
    EXPECT_NEAR(probe_chi(cell, psi, 0, 2), dense, 1e-9);
    const double single = holevo_chi(output_ensemble(cell, rho, kSignal));
    EXPECT_NEAR(probe_chi(cell, psi, 0, 1), single, 1e-9);
  }
}

TEST(TransmitterChi, TrivialCases) {
  EXPECT_EQ(transmitter_chi(PureLossCell(0.4, 0.4), Transmitter::epr(1, 1.0)), 0.0);
  EXPECT_EQ(transmitter_chi(PureLossCell(0.4, 0.9, 0.0), Transmitter::epr(1, 1.0)), 0.0);
  EXPECT_EQ(transmitter_chi(PureLossCell(0.4, 0.9), Transmitter::coherent(0.0)), 0.0);
}

TEST(TransmitterChi, BoundedByPriorEntropy) {
  for (double p : {0.2, 0.5}) {
    const PureLossCell cell(0.0, 1.0, p);
    for (const Transmitter& t : {Transmitter::epr(1, 3.0), Transmitter::fock_number(2.0), Transmitter::noon(1.0)}) {
      const double chi = transmitter_chi(cell, t);
      EXPECT_GE(chi, 0.0);
      EXPECT_LE(chi, math::binary_entropy(p) + 1e-12);
    }
  }
}

TEST(TransmitterChi, TwoEprCopiesAtIdealMemory) {
  // Independent dense values (one copy, two copies) at kappa1 = 1, n = 1.
  // The second copy helps at low kappa0 and stops helping near 0.66.
  struct Row {
    double kappa0, one, two;
  };
  const Row rows[] = {
      {0.05, 0.642686362601, 0.684475892545}, {0.3, 0.463713749481, 0.483778654362},
      {0.5, 0.332624504012, 0.339455882063},  {0.7, 0.196478874922, 0.195544759365},
      {0.9, 0.059689561130, 0.058391973169},  {0.95, 0.028133372026, 0.027609256239},
  };
  for (const Row& r : rows) {
    const PureLossCell cell(r.kappa0, 1.0);
    const double one = transmitter_chi(cell, Transmitter::epr(1, 1.0));
    const double two = transmitter_chi(cell, Transmitter::epr(2, 1.0));
    EXPECT_NEAR(one, r.one, 1e-9) << r.kappa0;
    EXPECT_NEAR(two, r.two, 1e-9) << r.kappa0;
    if (r.kappa0 <= 0.6) EXPECT_GT(two, one) << r.kappa0;
  }
}

TEST(TransmitterChi, UserCutoffDisablesGrowth) {
  const PureLossCell cell(0.2, 1.0);
  EXPECT_THROW(evaluate_transmitter(cell, Transmitter::epr(1, 5.0), fock::FockCutoff(10)), CutoffError);
  const ChiEvaluation automatic = evaluate_transmitter(cell, Transmitter::epr(1, 5.0));
  EXPECT_GT(automatic.cutoff.dim(), fock::default_cutoff(5.0).dim());
  const ChiEvaluation pinned = evaluate_transmitter(cell, Transmitter::epr(1, 5.0), automatic.cutoff);
  EXPECT_NEAR(pinned.chi, automatic.chi, 1e-15);
}

TEST(SqueezedCoherent, Optimiser) {
  const PureLossCell cell(0.0, 0.3);
  const double n = 1.0;
  EXPECT_NEAR(transmitter_chi(cell, Transmitter::squeezed_coherent(n, 0.0)), classical_reading_capacity(cell, n),
              1e-8);
  const SqueezedCoherentOptimum best = optimize_squeezed_coherent(cell, n);
  EXPECT_GE(best.chi, transmitter_chi(cell, Transmitter::squeezed_coherent(n, 0.0)) - 1e-12);
  EXPECT_GE(best.chi, transmitter_chi(cell, Transmitter::squeezed_coherent(n, 1.0)) - 1e-12);
  EXPECT_GT(best.chi, classical_reading_capacity(cell, n));
  EXPECT_GE(best.splitting, 0.0);
  EXPECT_LE(best.splitting, 1.0);
  EXPECT_THROW(optimize_squeezed_coherent(cell, 0.0), DomainError);
  EXPECT_LT(optimize_squeezed_coherent(cell, 1e-4).chi, 1e-3);
}

TEST(InformationGain, Examples) {
  EXPECT_EQ(information_gain(PureLossCell(0.6, 0.6), 1.0), 0.0);
  EXPECT_GT(information_gain(PureLossCell(0.5, 1.0), 1.0), 0.0);
  EXPECT_EQ(information_gain(PureLossCell(0.2, 0.9), 0.0), 0.0);
  EXPECT_NEAR(information_gain(PureLossCell(0.5, 1.0), 1.0),
              oracle::kChiEprHalfOneN1 - classical_reading_capacity(PureLossCell(0.5, 1.0), 1.0), 1e-9);
}
