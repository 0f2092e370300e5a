#ifndef SPARSEWARN_KNN_HPP
#define SPARSEWARN_KNN_HPP

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <string>
#include <vector>

#include "sparsewarn/dataset.hpp"

namespace sparsewarn {

enum class KnnMetric {
  kEuclidean,
  kStdEuclidean,
  kCorrelation,
  kCityblock,
  kCosine,
  kChebyshev,
  kHamming,
  kMinkowski3,
  kMahalanobis,
  kJaccard,
  kSpearman,
};

const char* knn_metric_name(KnnMetric metric);
KnnMetric knn_metric_from_name(const std::string& name);
std::vector<KnnMetric> all_knn_metrics();

/// Training-side state for one metric: feature scales for the standardized
/// Euclidean, the (regularized when singular) covariance factorization for
/// Mahalanobis, per-row component ranks for Spearman.
class KnnContext {
 public:
  KnnContext(const FeatureDataset& train, KnnMetric metric,
             std::vector<std::string>* warnings = nullptr);

  double distance(const Eigen::VectorXd& query, int train_index) const;
  double distance(const Eigen::VectorXd& query, const Eigen::VectorXd& query_ranks,
                  int train_index) const;
  Eigen::VectorXd component_ranks(const Eigen::VectorXd& v) const;

  /// Majority vote among the k nearest; distance ties prefer the lower
  /// training index, vote ties the lower class index.
  int classify(const Eigen::VectorXd& query, int k) const;

  /// Nearest-first training indices (ties by index), for sweeping k cheaply.
  std::vector<int> neighbor_order(const Eigen::VectorXd& query) const;
  int vote(const std::vector<int>& neighbor_order, int k) const;

  KnnMetric metric() const { return metric_; }
  int num_train() const { return train_.num_samples(); }

 private:
  FeatureDataset train_;
  KnnMetric metric_;
  Eigen::VectorXd feature_scale_;      // std-euclidean
  Eigen::LLT<Eigen::MatrixXd> cov_llt_;  // mahalanobis
  Eigen::MatrixXd train_ranks_;        // spearman, row-per-sample
};

int knn_classify(const FeatureDataset& train, const Eigen::VectorXd& query, int k,
                 KnnMetric metric);

}  // namespace sparsewarn

#endif
