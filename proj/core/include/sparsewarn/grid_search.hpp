#ifndef SPARSEWARN_GRID_SEARCH_HPP
#define SPARSEWARN_GRID_SEARCH_HPP

#include <cstdint>
#include <vector>

#include "sparsewarn/knn.hpp"
#include "sparsewarn/svm.hpp"

namespace sparsewarn {

/// Hyperparameter candidates. Defaults: k log-spaced over [1, N_o/2], all 11
/// metrics, the three kernel families with polynomial orders {2,3,4}, gamma
/// and C log-spaced over [1e-3, 1e3] with 7 points.
struct GridSpec {
  std::vector<int> knn_k;
  std::vector<KnnMetric> knn_metrics;
  std::vector<SvmKernel> svm_kernels;
  std::vector<int> svm_poly_orders;
  std::vector<double> svm_gamma;
  std::vector<double> svm_c;
};

GridSpec default_grid(int num_train_observations);
std::vector<int> log_spaced_ints(int lo, int hi, int points);
std::vector<double> log_spaced(double lo, double hi, int points);

struct KnnChoice {
  int k = 1;
  KnnMetric metric = KnnMetric::kEuclidean;
  double inner_accuracy = 0.0;
};

struct SvmChoice {
  SvmKernel kernel = SvmKernel::kLinear;
  int poly_order = 2;
  double gamma = 1.0;
  double c = 1.0;
  double inner_accuracy = 0.0;
};

/// Mean accuracy over an inner stratified CV per grid point, argmax returned;
/// grid points are visited in lexicographic order so ties resolve to the
/// smallest point.
KnnChoice grid_search_knn(const FeatureDataset& train_fold, const GridSpec& grid, int inner_k,
                          std::uint64_t seed);
SvmChoice grid_search_svm(const FeatureDataset& train_fold, const GridSpec& grid, int inner_k,
                          std::uint64_t seed);

}  // namespace sparsewarn

#endif
