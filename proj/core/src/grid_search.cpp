#include "sparsewarn/grid_search.hpp"

#include <algorithm>
#include <cmath>

#include "sparsewarn/errors.hpp"
#include "sparsewarn/folds.hpp"

namespace sparsewarn {

std::vector<double> log_spaced(double lo, double hi, int points) {
  std::vector<double> out;
  if (points == 1) {
    out.push_back(lo);
    return out;
  }
  const double step = (std::log10(hi) - std::log10(lo)) / (points - 1);
  for (int i = 0; i < points; ++i) out.push_back(std::pow(10.0, std::log10(lo) + i * step));
  return out;
}

std::vector<int> log_spaced_ints(int lo, int hi, int points) {
  std::vector<int> out;
  if (hi < lo) hi = lo;
  const double llo = std::log(static_cast<double>(lo));
  const double lhi = std::log(static_cast<double>(hi));
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    const int k = static_cast<int>(std::lround(std::exp(llo + t * (lhi - llo))));
    if (out.empty() || out.back() != k) out.push_back(k);
  }
  return out;
}

GridSpec default_grid(int num_train_observations) {
  GridSpec grid;
  grid.knn_k = log_spaced_ints(1, std::max(1, num_train_observations / 2), 10);
  grid.knn_metrics = all_knn_metrics();
  grid.svm_kernels = {SvmKernel::kLinear, SvmKernel::kPolynomial, SvmKernel::kRbf};
  grid.svm_poly_orders = {2, 3, 4};
  grid.svm_gamma = log_spaced(1e-3, 1e3, 7);
  grid.svm_c = log_spaced(1e-3, 1e3, 7);
  return grid;
}

namespace {

struct InnerFold {
  FeatureDataset train;
  FeatureDataset test;
};

std::vector<InnerFold> make_inner_folds(const FeatureDataset& train_fold, int inner_k,
                                        std::uint64_t seed) {
  const FoldPlan plan = stratified_kfold(train_fold, inner_k, seed);
  std::vector<InnerFold> folds;
  for (int f = 0; f < inner_k; ++f)
    folds.push_back({train_fold.subset(plan.train_indices(f)),
                     train_fold.subset(plan.test_indices(f))});
  return folds;
}

}  // namespace

KnnChoice grid_search_knn(const FeatureDataset& train_fold, const GridSpec& grid, int inner_k,
                          std::uint64_t seed) {
  if (grid.knn_k.empty() || grid.knn_metrics.empty())
    throw ConfigError("grid_search_knn: empty grid");
  const auto folds = make_inner_folds(train_fold, inner_k, seed);

  // accuracy[k][metric] accumulated over folds; one neighbor ordering per
  // (fold, metric) serves every k.
  std::vector<std::vector<int>> correct(grid.knn_k.size(),
                                        std::vector<int>(grid.knn_metrics.size(), 0));
  int total_queries = 0;
  for (const auto& fold : folds) {
    total_queries += fold.test.num_samples();
    for (std::size_t mi = 0; mi < grid.knn_metrics.size(); ++mi) {
      const KnnContext ctx(fold.train, grid.knn_metrics[mi]);
      for (int q = 0; q < fold.test.num_samples(); ++q) {
        const auto order = ctx.neighbor_order(fold.test.samples.row(q).transpose());
        for (std::size_t ki = 0; ki < grid.knn_k.size(); ++ki) {
          const int k = std::min(grid.knn_k[ki], fold.train.num_samples());
          if (ctx.vote(order, k) == fold.test.labels[static_cast<std::size_t>(q)])
            ++correct[ki][mi];
        }
      }
    }
  }

  KnnChoice best;
  double best_acc = -1.0;
  for (std::size_t ki = 0; ki < grid.knn_k.size(); ++ki) {
    for (std::size_t mi = 0; mi < grid.knn_metrics.size(); ++mi) {
      const double acc = static_cast<double>(correct[ki][mi]) / total_queries;
      if (acc > best_acc) {
        best_acc = acc;
        best = {grid.knn_k[ki], grid.knn_metrics[mi], acc};
      }
    }
  }
  return best;
}

SvmChoice grid_search_svm(const FeatureDataset& train_fold, const GridSpec& grid, int inner_k,
                          std::uint64_t seed) {
  if (grid.svm_kernels.empty() || grid.svm_c.empty())
    throw ConfigError("grid_search_svm: empty grid");
  const auto folds = make_inner_folds(train_fold, inner_k, seed);

  struct Point {
    SvmKernel kernel;
    int poly_order;
    double gamma;
    double c;
  };
  std::vector<Point> points;
  for (SvmKernel kernel : grid.svm_kernels) {
    if (kernel == SvmKernel::kLinear) {
      for (double c : grid.svm_c) points.push_back({kernel, 0, 0.0, c});
    } else if (kernel == SvmKernel::kPolynomial) {
      for (int order : grid.svm_poly_orders)
        for (double c : grid.svm_c) points.push_back({kernel, order, 0.0, c});
    } else {
      for (double gamma : grid.svm_gamma)
        for (double c : grid.svm_c) points.push_back({kernel, 0, gamma, c});
    }
  }

  SvmChoice best;
  double best_acc = -1.0;
  for (const Point& pt : points) {
    int correct = 0;
    int total = 0;
    for (const auto& fold : folds) {
      const double param = pt.kernel == SvmKernel::kPolynomial ? pt.poly_order : pt.gamma;
      const SvmModel model = svm_train(fold.train, pt.kernel, pt.c, param);
      for (int q = 0; q < fold.test.num_samples(); ++q) {
        if (model.predict(fold.test.samples.row(q).transpose()) ==
            fold.test.labels[static_cast<std::size_t>(q)])
          ++correct;
        ++total;
      }
    }
    const double acc = static_cast<double>(correct) / total;
    if (acc > best_acc) {
      best_acc = acc;
      best = {pt.kernel, pt.poly_order, pt.gamma, pt.c, acc};
    }
  }
  return best;
}

}  // namespace sparsewarn
