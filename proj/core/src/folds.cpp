#include "sparsewarn/folds.hpp"

#include <algorithm>

#include "sparsewarn/errors.hpp"
#include "sparsewarn/rng.hpp"

namespace sparsewarn {

std::vector<int> FoldPlan::test_indices(int fold) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == fold) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> FoldPlan::train_indices(int fold) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] != fold) out.push_back(static_cast<int>(i));
  return out;
}

FoldPlan stratified_kfold(const FeatureDataset& ds, int k, std::uint64_t seed) {
  if (k < 2) throw DataError("stratified_kfold: k must be at least 2");
  const int c = ds.num_classes();
  std::vector<std::vector<int>> by_class(static_cast<std::size_t>(c));
  for (int i = 0; i < ds.num_samples(); ++i)
    by_class[static_cast<std::size_t>(ds.labels[static_cast<std::size_t>(i)])].push_back(i);

  for (int cls = 0; cls < c; ++cls) {
    if (static_cast<int>(by_class[static_cast<std::size_t>(cls)].size()) < k)
      throw DataError("stratified_kfold: class " + std::to_string(cls) + " has " +
                      std::to_string(by_class[static_cast<std::size_t>(cls)].size()) +
                      " samples, fewer than k=" + std::to_string(k));
  }

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.assign(static_cast<std::size_t>(ds.num_samples()), -1);

  // Round-robin dealing of a per-class shuffle puts the remainder in the
  // lowest-numbered folds.
  for (int cls = 0; cls < c; ++cls) {
    auto& idx = by_class[static_cast<std::size_t>(cls)];
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(cls)));
    rng.shuffle(idx);
    for (std::size_t pos = 0; pos < idx.size(); ++pos)
      plan.assignments[static_cast<std::size_t>(idx[pos])] = static_cast<int>(pos % static_cast<std::size_t>(k));
  }
  return plan;
}

namespace {

FeatureDataset oversample_impl(const FeatureDataset& train, int target_per_class,
                               const Eigen::VectorXd* sigmas, double sigma_scalar,
                               std::uint64_t seed) {
  const auto counts = train.class_counts();
  const int c = train.num_classes();
  for (int cls = 0; cls < c; ++cls) {
    if (counts[static_cast<std::size_t>(cls)] > target_per_class)
      throw DataError("balance_oversample: target " + std::to_string(target_per_class) +
                      " is below class " + std::to_string(cls) + " count " +
                      std::to_string(counts[static_cast<std::size_t>(cls)]));
  }

  const int d = train.dim();
  const long long total = static_cast<long long>(target_per_class) * c;
  FeatureDataset out;
  out.samples.resize(total, d);
  out.labels.resize(static_cast<std::size_t>(total));
  out.class_names = train.class_names;

  // Originals first, in input order.
  const int n = train.num_samples();
  out.samples.topRows(n) = train.samples;
  std::copy(train.labels.begin(), train.labels.end(), out.labels.begin());

  std::vector<std::vector<int>> by_class(static_cast<std::size_t>(c));
  for (int i = 0; i < n; ++i)
    by_class[static_cast<std::size_t>(train.labels[static_cast<std::size_t>(i)])].push_back(i);

  Eigen::Index row = n;
  for (int cls = 0; cls < c; ++cls) {
    const auto& idx = by_class[static_cast<std::size_t>(cls)];
    Rng rng(mix_seed(seed, 0x0be5a11ceULL + static_cast<std::uint64_t>(cls)));
    for (int extra = counts[static_cast<std::size_t>(cls)]; extra < target_per_class; ++extra) {
      const int src = idx[static_cast<std::size_t>(rng.next_below(idx.size()))];
      out.samples.row(row) = train.samples.row(src);
      if (sigmas != nullptr) {
        for (int j = 0; j < d; ++j) out.samples(row, j) += (*sigmas)(j)*rng.next_normal();
      } else if (sigma_scalar > 0.0) {
        for (int j = 0; j < d; ++j) out.samples(row, j) += sigma_scalar * rng.next_normal();
      }
      out.labels[static_cast<std::size_t>(row)] = cls;
      ++row;
    }
  }
  return out;
}

}  // namespace

FeatureDataset balance_oversample(const FeatureDataset& train, int target_per_class,
                                  double jitter_sigma, std::uint64_t seed) {
  if (jitter_sigma < 0.0) throw DataError("balance_oversample: jitter_sigma must be >= 0");
  return oversample_impl(train, target_per_class, nullptr, jitter_sigma, seed);
}

FeatureDataset balance_oversample(const FeatureDataset& train, int target_per_class,
                                  const Eigen::VectorXd& jitter_sigma, std::uint64_t seed) {
  if (jitter_sigma.size() != train.dim())
    throw DataError("balance_oversample: jitter vector length does not match feature dimension");
  if ((jitter_sigma.array() < 0.0).any())
    throw DataError("balance_oversample: jitter_sigma must be >= 0");
  return oversample_impl(train, target_per_class, &jitter_sigma, 0.0, seed);
}

}  // namespace sparsewarn
