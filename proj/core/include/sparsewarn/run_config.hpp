#ifndef SPARSEWARN_RUN_CONFIG_HPP
#define SPARSEWARN_RUN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sparsewarn/dataset.hpp"
#include "sparsewarn/dictionary.hpp"
#include "sparsewarn/knn.hpp"
#include "sparsewarn/svm.hpp"

namespace sparsewarn {

enum class Method {
  kSrcOmp,
  kSrcHomotopy,
  kSrcFista,
  kSrcAdmm,
  kCrc,
  kCrcLight,
  kCsen1,
  kCsen2,
  kReconNet,
  kMlp,
  kKnn,
  kSvm,
};

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct TrainSchedule {
  int epochs = 15;
  double lr = 1e-4;
  int batch_size = 32;
};

enum class SaveModelMode { kNone, kFirstFold, kAll };

/// Parsed `key = value` run description. Method-specific keys are validated
/// against the named method(s) before any compute.
struct RunConfig {
  std::string dataset_path;
  FileFormat format = FileFormat::kCsv;
  std::vector<Method> methods;
  int pca_m = 512;
  int folds = 5;
  std::uint64_t seed = 42;
  std::string out_dir = "run";
  int threads = 1;
  int positive_class = 1;
  SaveModelMode save_model = SaveModelMode::kNone;

  long long balance_target = 0;   // 0: auto (majority class count)
  double balance_jitter = -1.0;   // <0: auto (0.01 of per-feature train std)

  double src_lambda = 0.01;
  double src_tol = 1e-8;
  int src_max_iter = 10000;
  double src_rho = 1.0;
  int src_omp_k = 0;              // 0: auto = clamp(m/2, 1, 64)

  double crc_lambda = -1.0;       // <0: tuned on an inner split
  int crc_dict_per_class = kAllAtoms;

  int csen_dict_per_class = 625;
  double csen_lambda = -1.0;      // <0: tuned (shared with crc-light)
  ProxyKind csen_proxy = ProxyKind::kRidge;
  double csen_tau = 0.5;
  TrainSchedule csen_train{15, 1e-4, 32};

  TrainSchedule reconnet_train{15, 1e-4, 32};
  TrainSchedule mlp_train{10, 1e-5, 32};
  std::vector<int> mlp_hidden{0, 256, 64};  // 0: projector output dimension

  int grid_inner_k = 5;
  int knn_fixed_k = 0;                       // 0: grid search
  std::string knn_fixed_metric;              // empty: grid search
  int knn_k_points = 10;
  std::vector<std::string> svm_kernels{"linear", "polynomial", "rbf"};
  std::vector<int> svm_poly_orders{2, 3, 4};
  int svm_grid_points = 7;
  double svm_fixed_c = 0.0;                  // 0: grid search
  double svm_fixed_gamma = 0.0;
  std::string svm_fixed_kernel;

  /// Resolved echo of every effective key, for the run manifest.
  std::string echo() const;
};

RunConfig parse_run_config(const std::string& path);
RunConfig parse_run_config_text(const std::string& text, const std::string& origin);

}  // namespace sparsewarn

#endif
