#include "sparsewarn/knn.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparsewarn/errors.hpp"

namespace sparsewarn {

namespace {

constexpr const char* kMetricNames[] = {
    "euclidean", "std-euclidean", "correlation", "cityblock",   "cosine",  "chebyshev",
    "hamming",   "minkowski3",    "mahalanobis", "jaccard",     "spearman"};

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ca = a.array() - a.mean();
  const Eigen::VectorXd cb = b.array() - b.mean();
  const double denom = ca.norm() * cb.norm();
  if (denom == 0.0) return 0.0;  // constant vector: treat as uncorrelated
  return ca.dot(cb) / denom;
}

}  // namespace

const char* knn_metric_name(KnnMetric metric) {
  return kMetricNames[static_cast<int>(metric)];
}

KnnMetric knn_metric_from_name(const std::string& name) {
  for (int i = 0; i < 11; ++i)
    if (name == kMetricNames[i]) return static_cast<KnnMetric>(i);
  throw ConfigError("unknown k-NN metric '" + name + "'");
}

std::vector<KnnMetric> all_knn_metrics() {
  std::vector<KnnMetric> out;
  for (int i = 0; i < 11; ++i) out.push_back(static_cast<KnnMetric>(i));
  return out;
}

KnnContext::KnnContext(const FeatureDataset& train, KnnMetric metric,
                       std::vector<std::string>* warnings)
    : train_(train), metric_(metric) {
  const int n = train_.num_samples();
  const int d = train_.dim();

  if (metric_ == KnnMetric::kStdEuclidean) {
    const Eigen::RowVectorXd mean = train_.samples.colwise().mean();
    const Eigen::MatrixXd centered = train_.samples.rowwise() - mean;
    const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
    feature_scale_.resize(d);
    for (int j = 0; j < d; ++j) {
      const double sd = std::sqrt(centered.col(j).squaredNorm() / denom);
      if (sd > 0.0) {
        feature_scale_(j) = sd;
      } else {
        feature_scale_(j) = 1.0;
        if (warnings != nullptr)
          warnings->push_back("knn std-euclidean: feature " + std::to_string(j) +
                              " has zero variance, scale set to 1");
      }
    }
  } else if (metric_ == KnnMetric::kMahalanobis) {
    const Eigen::RowVectorXd mean = train_.samples.colwise().mean();
    const Eigen::MatrixXd centered = train_.samples.rowwise() - mean;
    const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
    Eigen::MatrixXd cov = centered.transpose() * centered / denom;
    cov_llt_.compute(cov);
    const bool singular =
        cov_llt_.info() != Eigen::Success ||
        (cov.fullPivLu().rank() < d);
    if (singular) {
      cov.diagonal().array() += 1e-6 * cov.trace() / d;
      cov_llt_.compute(cov);
      if (cov_llt_.info() != Eigen::Success)
        throw NumericError("knn mahalanobis: covariance factorization failed after regularization");
      if (warnings != nullptr)
        warnings->push_back("knn mahalanobis: singular covariance regularized with 1e-6*trace/d");
    }
  } else if (metric_ == KnnMetric::kSpearman) {
    train_ranks_.resize(n, d);
    for (int i = 0; i < n; ++i)
      train_ranks_.row(i) = component_ranks(train_.samples.row(i).transpose()).transpose();
  }
}

Eigen::VectorXd KnnContext::component_ranks(const Eigen::VectorXd& v) const {
  const int d = static_cast<int>(v.size());
  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return v(a) < v(b) || (v(a) == v(b) && a < b);
  });
  Eigen::VectorXd ranks(d);
  int i = 0;
  while (i < d) {
    int j = i;
    while (j + 1 < d && v(order[static_cast<std::size_t>(j + 1)]) == v(order[static_cast<std::size_t>(i)])) ++j;
    const double avg = 0.5 * (i + j) + 1.0;  // average rank for ties, 1-based
    for (int t = i; t <= j; ++t) ranks(order[static_cast<std::size_t>(t)]) = avg;
    i = j + 1;
  }
  return ranks;
}

double KnnContext::distance(const Eigen::VectorXd& query, int train_index) const {
  if (metric_ == KnnMetric::kSpearman)
    return distance(query, component_ranks(query), train_index);
  return distance(query, Eigen::VectorXd(), train_index);
}

double KnnContext::distance(const Eigen::VectorXd& query, const Eigen::VectorXd& query_ranks,
                            int train_index) const {
  const Eigen::VectorXd row = train_.samples.row(train_index).transpose();
  switch (metric_) {
    case KnnMetric::kEuclidean:
      return (query - row).norm();
    case KnnMetric::kStdEuclidean:
      return std::sqrt(((query - row).array() / feature_scale_.array()).square().sum());
    case KnnMetric::kCorrelation:
      return 1.0 - pearson(query, row);
    case KnnMetric::kCityblock:
      return (query - row).lpNorm<1>();
    case KnnMetric::kCosine: {
      const double denom = query.norm() * row.norm();
      if (denom == 0.0) return 1.0;
      return 1.0 - query.dot(row) / denom;
    }
    case KnnMetric::kChebyshev:
      return (query - row).lpNorm<Eigen::Infinity>();
    case KnnMetric::kHamming: {
      int diff = 0;
      for (Eigen::Index j = 0; j < query.size(); ++j)
        diff += (query(j) != 0.0) != (row(j) != 0.0);
      return static_cast<double>(diff) / query.size();
    }
    case KnnMetric::kMinkowski3:
      return std::cbrt((query - row).array().abs().cube().sum());
    case KnnMetric::kMahalanobis: {
      const Eigen::VectorXd delta = query - row;
      return std::sqrt(std::max(0.0, delta.dot(cov_llt_.solve(delta))));
    }
    case KnnMetric::kJaccard: {
      int mismatch = 0, any = 0;
      for (Eigen::Index j = 0; j < query.size(); ++j) {
        const bool a = query(j) != 0.0;
        const bool b = row(j) != 0.0;
        if (a || b) {
          ++any;
          if (a != b) ++mismatch;
        }
      }
      return any == 0 ? 0.0 : static_cast<double>(mismatch) / any;
    }
    case KnnMetric::kSpearman:
      return 1.0 - pearson(query_ranks, train_ranks_.row(train_index).transpose());
  }
  throw NumericError("knn: unhandled metric");
}

std::vector<int> KnnContext::neighbor_order(const Eigen::VectorXd& query) const {
  const int n = train_.num_samples();
  Eigen::VectorXd query_ranks;
  if (metric_ == KnnMetric::kSpearman) query_ranks = component_ranks(query);
  std::vector<std::pair<double, int>> dist(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    dist[static_cast<std::size_t>(i)] = {distance(query, query_ranks, i), i};
  std::sort(dist.begin(), dist.end());  // pair ordering breaks ties by lower index
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = dist[static_cast<std::size_t>(i)].second;
  return order;
}

int KnnContext::vote(const std::vector<int>& order, int k) const {
  if (k < 1 || k > static_cast<int>(order.size()))
    throw NumericError("knn: k=" + std::to_string(k) + " outside [1, N_train]");
  std::vector<int> counts(static_cast<std::size_t>(train_.num_classes()), 0);
  for (int i = 0; i < k; ++i)
    ++counts[static_cast<std::size_t>(train_.labels[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])])];
  int best = 0;
  for (int cls = 1; cls < train_.num_classes(); ++cls)
    if (counts[static_cast<std::size_t>(cls)] > counts[static_cast<std::size_t>(best)]) best = cls;
  return best;
}

int KnnContext::classify(const Eigen::VectorXd& query, int k) const {
  return vote(neighbor_order(query), k);
}

int knn_classify(const FeatureDataset& train, const Eigen::VectorXd& query, int k,
                 KnnMetric metric) {
  return KnnContext(train, metric).classify(query, k);
}

}  // namespace sparsewarn
