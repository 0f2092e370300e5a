#ifndef SPARSEWARN_EVAL_HPP
#define SPARSEWARN_EVAL_HPP

#include <string>
#include <vector>

#include "sparsewarn/dataset.hpp"
#include "sparsewarn/dictionary.hpp"
#include "sparsewarn/folds.hpp"
#include "sparsewarn/metrics.hpp"
#include "sparsewarn/model_io.hpp"
#include "sparsewarn/normalize.hpp"
#include "sparsewarn/pca.hpp"
#include "sparsewarn/run_config.hpp"

namespace sparsewarn {

struct FoldResult {
  int fold = 0;
  ConfusionMatrix cm;
  MetricReport report;
  double score_seconds = 0.0;
  std::vector<int> test_indices;
  std::vector<int> truth;
  std::vector<int> predictions;
};

struct EvalReport {
  Method method = Method::kCrc;
  std::vector<FoldResult> folds;
  ConfusionMatrix cumulative;
  MetricReport cumulative_metrics;
  double mean_accuracy = 0.0;
  double mean_sensitivity = 0.0;
  double mean_specificity = 0.0;
  double mean_score_seconds = 0.0;
  double min_score_seconds = 0.0;
  double max_score_seconds = 0.0;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;  // resolved per-fold hyperparameters
};

/// Full stratified-CV protocol for one method: per fold, fit projection /
/// normalization / dictionary / classifier on the training split only, score
/// the unseen fold with a wall-clock timer around the scoring loop, and
/// accumulate the confusion matrices. Byte-deterministic given cfg.seed
/// except for the measured seconds. When `models` is given, the per-fold
/// fitted components are appended per cfg.save_model.
EvalReport run_cv(const RunConfig& cfg, Method method, const FeatureDataset& ds,
                  std::vector<ModelBundle>* models = nullptr);

struct BenchRow {
  std::string method;
  double mean_seconds = 0.0;
  double sensitivity = 0.0;
};

/// One row per completed report: mean test-set scoring seconds over folds and
/// the cumulative sensitivity (the time-vs-sensitivity plot input).
std::vector<BenchRow> benchmark_time(const std::vector<EvalReport>& reports);

// ----- harness building blocks, shared with tests and model persistence -----

/// Oversamples the training split to the configured target (default: the
/// majority class count) with the configured jitter (default: 0.01 of each
/// feature's standard deviation).
FeatureDataset balance_for_fold(const FeatureDataset& train_split, const RunConfig& cfg,
                                std::uint64_t fold_seed);

/// PCA fit on the balanced training split plus the per-method normalization,
/// applied to both splits.
struct ProjectedFold {
  Projector projector;
  NormStats stats;
  FeatureDataset train;   // projected + normalized rows, labels preserved
  Eigen::MatrixXd test;   // projected + normalized query rows
};
ProjectedFold project_and_normalize(const FeatureDataset& balanced_train,
                                    const Eigen::MatrixXd& test_rows, int pca_m, NormMode mode);

/// Dictionary-side assets of the support-estimator methods: the per-class
/// dictionary, its ridge denoiser (lambda tuned on an inner split when
/// lambda_or_auto < 0), the class-block plane, and the training rows left for
/// the estimator network.
struct EstimatorAssets {
  Dictionary dict;
  RidgeDenoiser denoiser;
  PlaneLayout plane;
  double lambda = 0.0;
  std::vector<int> learner_rows;
};
EstimatorAssets build_estimator_assets(const FeatureDataset& projected_train, int dict_per_class,
                                       double lambda_or_auto, std::uint64_t fold_seed);

// ----- report renderers -----

std::string render_text_report(const std::vector<EvalReport>& reports,
                               const std::vector<std::string>& class_names, int positive_class);
std::string render_metrics_csv(const std::vector<EvalReport>& reports);
std::string render_timing_csv(const std::vector<BenchRow>& rows);
std::vector<BenchRow> parse_timing_csv(const std::string& text);

}  // namespace sparsewarn

#endif
