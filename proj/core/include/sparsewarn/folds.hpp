#ifndef SPARSEWARN_FOLDS_HPP
#define SPARSEWARN_FOLDS_HPP

#include <cstdint>
#include <vector>

#include "sparsewarn/dataset.hpp"

namespace sparsewarn {

/// Disjoint-partition cross-validation plan. `assignments[i]` is the fold
/// index of sample i; it depends on (labels, k, seed) only.
struct FoldPlan {
  int k = 0;
  std::vector<int> assignments;
  std::uint64_t seed = 0;

  std::vector<int> test_indices(int fold) const;
  std::vector<int> train_indices(int fold) const;
};

/// Stratified k-fold: per-class fold sizes differ by at most one, remainder
/// assigned to the lowest-numbered folds. Throws DataError when a class has
/// fewer than k samples.
FoldPlan stratified_kfold(const FeatureDataset& ds, int k, std::uint64_t seed);

/// Oversamples every class up to exactly target_per_class rows. Originals are
/// kept unmodified in their input order; added rows are uniform resamples of
/// existing class rows plus zero-mean Gaussian jitter of scale jitter_sigma
/// per component. jitter_sigma 0 yields exact copies.
FeatureDataset balance_oversample(const FeatureDataset& train, int target_per_class,
                                  double jitter_sigma, std::uint64_t seed);

/// Per-feature jitter scales (the harness default is 0.01 of each feature's
/// training standard deviation).
FeatureDataset balance_oversample(const FeatureDataset& train, int target_per_class,
                                  const Eigen::VectorXd& jitter_sigma, std::uint64_t seed);

}  // namespace sparsewarn

#endif
