#ifndef SPARSEWARN_SYNTH_HPP
#define SPARSEWARN_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "sparsewarn/dataset.hpp"

namespace sparsewarn {

/// Gaussian-mixture generator. Class means sit on mutually orthogonal
/// directions scaled so every pair lies 2*separation*sigma apart; each mean is
/// separation*sigma from the shared decision midpoint, so the optimal error
/// rate is Phi(-separation) per pair.
struct SynthParams {
  int classes = 2;
  std::vector<long long> per_class;  // one entry, or one per class
  int dim = 64;
  double separation = 3.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

FeatureDataset synth_dataset(const SynthParams& params);

}  // namespace sparsewarn

#endif
