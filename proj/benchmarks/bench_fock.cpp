#include <benchmark/benchmark.h>

#include <cmath>

#include "qreading/fock.hpp"
#include "qreading/gaussian.hpp"

namespace {

using namespace qreading;

void BM_LossOverlapGram(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  // Thermal marginal of a TMSV with one mean photon.
  Eigen::VectorXd weights(dim);
  for (int m = 0; m < dim; ++m) weights(m) = std::pow(0.5, m + 1);
  const Eigen::MatrixXcd reduced = weights.cast<fock::Complex>().asDiagonal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fock::loss_overlap_gram(reduced, 0.3, 0.9));
  }
}
BENCHMARK(BM_LossOverlapGram)->Arg(40)->Arg(80)->Arg(160);

// Dense reference path, for comparison with the Gram route above.
void BM_DenseLossChannel(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const fock::FockKet psi = fock::tmsv_ket(gaussian::SqueezeParam::from_mean_photons(0.05), fock::FockCutoff(dim));
  const fock::FockDensityMatrix rho = fock::FockDensityMatrix::from_ket(psi);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fock::loss_channel(rho, 0, 0.5));
  }
}
BENCHMARK(BM_DenseLossChannel)->Arg(8)->Arg(12)->Arg(16);

}  // namespace
