#include "sparsewarn/eval.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "sparsewarn/errors.hpp"
#include "sparsewarn/grid_search.hpp"
#include "sparsewarn/knn.hpp"
#include "sparsewarn/network.hpp"
#include "sparsewarn/rbc.hpp"
#include "sparsewarn/solvers.hpp"
#include "sparsewarn/svm.hpp"
#include "sparsewarn/train.hpp"

namespace sparsewarn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool is_src(Method m) {
  return m == Method::kSrcOmp || m == Method::kSrcHomotopy || m == Method::kSrcFista ||
         m == Method::kSrcAdmm;
}

bool is_estimator_net(Method m) {
  return m == Method::kCsen1 || m == Method::kCsen2 || m == Method::kReconNet;
}

SolverParams src_params(const RunConfig& cfg) {
  SolverParams p;
  p.lambda = cfg.src_lambda;
  p.tol = cfg.src_tol;
  p.max_iter = cfg.src_max_iter;
  p.rho = cfg.src_rho;
  return p;
}

int resolve_omp_budget(const RunConfig& cfg, int m) {
  if (cfg.src_omp_k > 0) return std::min(cfg.src_omp_k, m);
  return std::max(1, std::min(m / 2, 64));
}

Tensor plane_tensor(const Eigen::VectorXd& code, const PlaneLayout& layout) {
  const Eigen::MatrixXd plane = reshape_to_plane(code, layout);
  Tensor t = Tensor::zeros(layout.height, layout.width, 1);
  for (int r = 0; r < layout.height; ++r)
    for (int c = 0; c < layout.width; ++c) t.at(r, c, 0) = plane(r, c);
  return t;
}

Tensor flat_tensor(const Eigen::VectorXd& v) {
  Tensor t = Tensor::flat(static_cast<int>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) t.values[static_cast<std::size_t>(i)] = v(i);
  return t;
}

int argmax_class(const Eigen::VectorXd& probs) {
  int best = 0;
  for (Eigen::Index i = 1; i < probs.size(); ++i)
    if (probs(i) > probs(best)) best = static_cast<int>(i);
  return best;
}

struct FoldOutcome {
  FoldResult result;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
  std::optional<ModelBundle> model;
};

FoldOutcome run_one_fold(const RunConfig& cfg, Method method, const FeatureDataset& ds,
                         const FoldPlan& plan, int fold, bool want_model) {
  const std::uint64_t fold_seed = cfg.seed + static_cast<std::uint64_t>(fold);
  FoldOutcome outcome;
  FoldResult& fr = outcome.result;
  fr.fold = fold;
  fr.test_indices = plan.test_indices(fold);

  const FeatureDataset train_split = ds.subset(plan.train_indices(fold));
  const FeatureDataset test_split = ds.subset(fr.test_indices);
  fr.truth = test_split.labels;
  const int n_test = test_split.num_samples();

  const FeatureDataset balanced = balance_for_fold(train_split, cfg, fold_seed);

  std::function<int(int)> score;  // test row index -> predicted class

  // Kept alive for the scorer closures.
  ProjectedFold pf;
  Dictionary dict;
  RidgeDenoiser denoiser;
  EstimatorAssets assets;
  Network net(1, 1, 1);
  Eigen::MatrixXd mlp_test;
  FeatureDataset baseline_train;
  Eigen::MatrixXd baseline_test;
  KnnContext* knn_ctx = nullptr;
  std::unique_ptr<KnnContext> knn_ctx_owner;
  SvmModel svm_model;
  int knn_k = 1;

  if (is_src(method)) {
    pf = project_and_normalize(balanced, test_split.samples, cfg.pca_m, NormMode::kUnitNorm);
    dict = build_dictionary(pf.train, kAllAtoms, fold_seed);
    SolverParams params = src_params(cfg);
    if (method == Method::kSrcFista) params.lipschitz = squared_spectral_norm(dict.atoms);
    SparseSolver solver;
    switch (method) {
      case Method::kSrcOmp: {
        const int budget = resolve_omp_budget(cfg, cfg.pca_m);
        outcome.notes.push_back("fold " + std::to_string(fold) + ": omp budget " +
                                std::to_string(budget));
        solver = [params, budget](const Eigen::MatrixXd& D, const Eigen::VectorXd& y) {
          return omp(D, y, budget, params);
        };
        break;
      }
      case Method::kSrcFista:
        solver = [params](const Eigen::MatrixXd& D, const Eigen::VectorXd& y) {
          return fista(D, y, params);
        };
        break;
      case Method::kSrcAdmm:
        solver = [params](const Eigen::MatrixXd& D, const Eigen::VectorXd& y) {
          return admm_lasso(D, y, params);
        };
        break;
      default:
        solver = [params](const Eigen::MatrixXd& D, const Eigen::VectorXd& y) {
          return homotopy(D, y, params.lambda, params);
        };
        break;
    }
    score = [&, solver](int i) {
      return src_classify(dict, pf.test.row(i).transpose(), solver).predicted;
    };
  } else if (method == Method::kCrc) {
    pf = project_and_normalize(balanced, test_split.samples, cfg.pca_m, NormMode::kUnitNorm);
    double lambda = cfg.crc_lambda;
    if (lambda < 0.0) {
      const FoldPlan inner = stratified_kfold(pf.train, 5, fold_seed);
      lambda = tune_crc_lambda(pf.train.subset(inner.train_indices(0)),
                               pf.train.subset(inner.test_indices(0)), crc_lambda_grid());
    }
    outcome.notes.push_back("fold " + std::to_string(fold) + ": crc lambda " +
                            std::to_string(lambda));
    dict = build_dictionary(pf.train, cfg.crc_dict_per_class, fold_seed);
    denoiser = build_denoiser(dict, lambda);
    score = [&](int i) { return crc_classify(dict, denoiser, pf.test.row(i).transpose()).predicted; };
  } else if (method == Method::kCrcLight) {
    pf = project_and_normalize(balanced, test_split.samples, cfg.pca_m, NormMode::kUnitNorm);
    assets = build_estimator_assets(pf.train, cfg.csen_dict_per_class, cfg.csen_lambda, fold_seed);
    outcome.notes.push_back("fold " + std::to_string(fold) + ": denoiser lambda " +
                            std::to_string(assets.lambda));
    score = [&](int i) {
      return crc_classify(assets.dict, assets.denoiser, pf.test.row(i).transpose()).predicted;
    };
  } else if (is_estimator_net(method)) {
    pf = project_and_normalize(balanced, test_split.samples, cfg.pca_m, NormMode::kUnitNorm);
    assets = build_estimator_assets(pf.train, cfg.csen_dict_per_class, cfg.csen_lambda, fold_seed);
    outcome.notes.push_back("fold " + std::to_string(fold) + ": denoiser lambda " +
                            std::to_string(assets.lambda) + ", plane " +
                            std::to_string(assets.plane.height) + "x" +
                            std::to_string(assets.plane.width));

    const bool transpose_proxy = cfg.csen_proxy == ProxyKind::kTranspose;
    auto make_code = [&](const Eigen::VectorXd& y) {
      return transpose_proxy ? proxy(assets.dict, y) : proxy(assets.denoiser, y);
    };

    std::vector<Tensor> inputs;
    std::vector<int> labels;
    inputs.reserve(assets.learner_rows.size());
    for (int row : assets.learner_rows) {
      inputs.push_back(plane_tensor(make_code(pf.train.samples.row(row).transpose()), assets.plane));
      labels.push_back(pf.train.labels[static_cast<std::size_t>(row)]);
    }

    const bool odd = assets.plane.height % 2 != 0 || assets.plane.width % 2 != 0;
    if (method == Method::kCsen1) {
      net = build_csen1(assets.plane, fold_seed);
    } else if (method == Method::kCsen2) {
      net = build_csen2(assets.plane, odd, fold_seed);
    } else {
      net = build_reconnet_se(assets.plane, fold_seed);
    }

    const TrainSchedule& sched =
        method == Method::kReconNet ? cfg.reconnet_train : cfg.csen_train;
    TrainConfig tc;
    tc.lr = sched.lr;
    tc.epochs = sched.epochs;
    tc.batch_size = sched.batch_size;
    tc.seed = fold_seed;
    const TrainResult tr = train(net, inputs, labels, tc);
    if (!tr.epoch_loss.empty())
      outcome.notes.push_back("fold " + std::to_string(fold) + ": final train loss " +
                              std::to_string(tr.epoch_loss.back()));

    score = [&, make_code](int i) {
      const Tensor t = plane_tensor(make_code(pf.test.row(i).transpose()), assets.plane);
      return argmax_class(net.forward(t));
    };
  } else if (method == Method::kMlp) {
    pf.projector = fit_pca(balanced, cfg.pca_m);
    auto [train_rows, stats] = normalize_fit(balanced.samples, NormMode::kZscore);
    for (const std::string& w : stats.warnings) outcome.warnings.push_back(w);
    pf.stats = stats;
    mlp_test = normalize_apply(test_split.samples, stats);

    std::vector<int> hidden = cfg.mlp_hidden;
    if (hidden[0] == 0) hidden[0] = cfg.pca_m;
    net = build_mlp(pf.projector, hidden, ds.num_classes(), fold_seed);

    std::vector<Tensor> inputs;
    inputs.reserve(static_cast<std::size_t>(train_rows.rows()));
    for (Eigen::Index i = 0; i < train_rows.rows(); ++i)
      inputs.push_back(flat_tensor(train_rows.row(i).transpose()));

    TrainConfig tc;
    tc.lr = cfg.mlp_train.lr;
    tc.epochs = cfg.mlp_train.epochs;
    tc.batch_size = cfg.mlp_train.batch_size;
    tc.seed = fold_seed;
    const TrainResult tr = train(net, inputs, balanced.labels, tc);
    if (!tr.epoch_loss.empty())
      outcome.notes.push_back("fold " + std::to_string(fold) + ": final train loss " +
                              std::to_string(tr.epoch_loss.back()));

    score = [&](int i) {
      return argmax_class(net.forward(flat_tensor(mlp_test.row(i).transpose())));
    };
  } else if (method == Method::kKnn || method == Method::kSvm) {
    pf.projector = fit_pca(balanced, cfg.pca_m);
    auto [train_rows, stats] = normalize_fit(project_rows(pf.projector, balanced.samples),
                                             NormMode::kZscore);
    for (const std::string& w : stats.warnings) outcome.warnings.push_back(w);
    pf.stats = stats;
    baseline_test = normalize_apply(project_rows(pf.projector, test_split.samples), stats);
    baseline_train = balanced;
    baseline_train.samples = train_rows;

    GridSpec grid = default_grid(baseline_train.num_samples());
    grid.knn_k = log_spaced_ints(1, std::max(1, baseline_train.num_samples() / 2),
                                 cfg.knn_k_points);
    if (method == Method::kKnn) {
      KnnChoice choice;
      if (cfg.knn_fixed_k > 0 && !cfg.knn_fixed_metric.empty()) {
        choice.k = cfg.knn_fixed_k;
        choice.metric = knn_metric_from_name(cfg.knn_fixed_metric);
      } else {
        if (cfg.knn_fixed_k > 0) grid.knn_k = {cfg.knn_fixed_k};
        if (!cfg.knn_fixed_metric.empty())
          grid.knn_metrics = {knn_metric_from_name(cfg.knn_fixed_metric)};
        choice = grid_search_knn(baseline_train, grid, cfg.grid_inner_k, fold_seed);
      }
      outcome.notes.push_back("fold " + std::to_string(fold) + ": knn k " +
                              std::to_string(choice.k) + " metric " +
                              knn_metric_name(choice.metric));
      knn_ctx_owner =
          std::make_unique<KnnContext>(baseline_train, choice.metric, &outcome.warnings);
      knn_ctx = knn_ctx_owner.get();
      knn_k = std::min(choice.k, baseline_train.num_samples());
      score = [&](int i) { return knn_ctx->classify(baseline_test.row(i).transpose(), knn_k); };
    } else {
      SvmChoice choice;
      if (!cfg.svm_fixed_kernel.empty() && cfg.svm_fixed_c > 0.0) {
        choice.kernel = svm_kernel_from_name(cfg.svm_fixed_kernel);
        choice.c = cfg.svm_fixed_c;
        choice.gamma = cfg.svm_fixed_gamma;
        choice.poly_order = cfg.svm_poly_orders.empty() ? 3 : cfg.svm_poly_orders.front();
      } else {
        grid.svm_kernels.clear();
        for (const std::string& name : cfg.svm_kernels)
          grid.svm_kernels.push_back(svm_kernel_from_name(name));
        grid.svm_poly_orders = cfg.svm_poly_orders;
        grid.svm_gamma = log_spaced(1e-3, 1e3, cfg.svm_grid_points);
        grid.svm_c = log_spaced(1e-3, 1e3, cfg.svm_grid_points);
        choice = grid_search_svm(baseline_train, grid, cfg.grid_inner_k, fold_seed);
      }
      outcome.notes.push_back(
          "fold " + std::to_string(fold) + ": svm kernel " + svm_kernel_name(choice.kernel) +
          " C " + std::to_string(choice.c) +
          (choice.kernel == SvmKernel::kRbf ? " gamma " + std::to_string(choice.gamma)
           : choice.kernel == SvmKernel::kPolynomial
               ? " order " + std::to_string(choice.poly_order)
               : ""));
      const double param =
          choice.kernel == SvmKernel::kPolynomial ? choice.poly_order : choice.gamma;
      svm_model = svm_train(baseline_train, choice.kernel, choice.c, param);
      if (!svm_model.converged)
        outcome.warnings.push_back("fold " + std::to_string(fold) +
                                   ": svm did not reach the KKT tolerance, best-so-far duals used");
      score = [&](int i) { return svm_model.predict(baseline_test.row(i).transpose()); };
    }
  } else {
    throw ConfigError("run_cv: unhandled method");
  }

  fr.predictions.resize(static_cast<std::size_t>(n_test));
  const auto start = Clock::now();
  for (int i = 0; i < n_test; ++i) fr.predictions[static_cast<std::size_t>(i)] = score(i);
  fr.score_seconds = seconds_since(start);

  fr.cm = confusion_from_predictions(fr.truth, fr.predictions, cfg.positive_class);
  fr.report = metrics(fr.cm);

  if (want_model) {
    ModelBundle bundle;
    bundle.info["method"] = method_name(method);
    bundle.info["fold"] = std::to_string(fold);
    bundle.info["seed"] = std::to_string(fold_seed);
    if (pf.projector.basis.size() > 0) {
      bundle.projector = pf.projector;
      bundle.norm = pf.stats;
    }
    if (is_src(method) || method == Method::kCrc) bundle.dict = dict;
    if (method == Method::kCrc) bundle.denoiser = denoiser;
    if (method == Method::kCrcLight || is_estimator_net(method)) {
      bundle.dict = assets.dict;
      bundle.denoiser = assets.denoiser;
      bundle.plane = assets.plane;
    }
    if (is_estimator_net(method) || method == Method::kMlp) {
      bundle.network_manifest = net.manifest();
      bundle.network_params = net.export_params();
    }
    outcome.model = std::move(bundle);
  }
  return outcome;
}

}  // namespace

FeatureDataset balance_for_fold(const FeatureDataset& train_split, const RunConfig& cfg,
                                std::uint64_t fold_seed) {
  const auto counts = train_split.class_counts();
  long long target = cfg.balance_target;
  if (target == 0)
    for (int c : counts) target = std::max<long long>(target, c);

  if (cfg.balance_jitter >= 0.0)
    return balance_oversample(train_split, static_cast<int>(target), cfg.balance_jitter,
                              fold_seed);

  // Default jitter: 0.01 of each feature's training standard deviation.
  const Eigen::RowVectorXd mean = train_split.samples.colwise().mean();
  const Eigen::MatrixXd centered = train_split.samples.rowwise() - mean;
  const double denom =
      train_split.num_samples() > 1 ? static_cast<double>(train_split.num_samples() - 1) : 1.0;
  Eigen::VectorXd sigmas(train_split.dim());
  for (int j = 0; j < train_split.dim(); ++j)
    sigmas(j) = 0.01 * std::sqrt(centered.col(j).squaredNorm() / denom);
  return balance_oversample(train_split, static_cast<int>(target), sigmas, fold_seed);
}

ProjectedFold project_and_normalize(const FeatureDataset& balanced_train,
                                    const Eigen::MatrixXd& test_rows, int pca_m, NormMode mode) {
  ProjectedFold pf;
  pf.projector = fit_pca(balanced_train, pca_m);
  auto [train_rows, stats] = normalize_fit(project_rows(pf.projector, balanced_train.samples), mode);
  pf.stats = std::move(stats);
  pf.train = balanced_train;
  pf.train.samples = std::move(train_rows);
  pf.test = normalize_apply(project_rows(pf.projector, test_rows), pf.stats);
  return pf;
}

EstimatorAssets build_estimator_assets(const FeatureDataset& projected_train, int dict_per_class,
                                       double lambda_or_auto, std::uint64_t fold_seed) {
  EstimatorAssets assets;
  const auto chosen = dictionary_selection(projected_train, dict_per_class, fold_seed);
  std::vector<char> in_dict(static_cast<std::size_t>(projected_train.num_samples()), 0);
  for (const auto& rows : chosen)
    for (int r : rows) in_dict[static_cast<std::size_t>(r)] = 1;
  for (int i = 0; i < projected_train.num_samples(); ++i)
    if (!in_dict[static_cast<std::size_t>(i)]) assets.learner_rows.push_back(i);

  assets.dict = build_dictionary(projected_train, dict_per_class, fold_seed);
  assets.plane = make_plane_layout(assets.dict);

  double lambda = lambda_or_auto;
  if (lambda < 0.0) {
    // Tune the ridge parameter the collaborative classifier would use with
    // this same dictionary, validating on a fifth of the learner rows.
    FeatureDataset dict_rows = projected_train.subset([&] {
      std::vector<int> rows;
      for (const auto& class_rows : chosen) rows.insert(rows.end(), class_rows.begin(), class_rows.end());
      return rows;
    }());
    if (assets.learner_rows.empty())
      throw DataError("estimator assets: no rows left to validate the ridge parameter");
    const FeatureDataset learner = projected_train.subset(assets.learner_rows);
    const FoldPlan inner = stratified_kfold(learner, 5, fold_seed);
    lambda = tune_crc_lambda(dict_rows, learner.subset(inner.test_indices(0)), crc_lambda_grid());
  }
  assets.lambda = lambda;
  assets.denoiser = build_denoiser(assets.dict, lambda);
  return assets;
}

EvalReport run_cv(const RunConfig& cfg, Method method, const FeatureDataset& ds,
                  std::vector<ModelBundle>* models) {
  ds.validate();
  if (ds.num_classes() != 2 &&
      (method == Method::kSvm || cfg.positive_class >= ds.num_classes()))
    throw DataError("run_cv: binary protocol requires two classes");

  const FoldPlan plan = stratified_kfold(ds, cfg.folds, cfg.seed);
  auto want_model = [&](int fold) {
    if (models == nullptr || cfg.save_model == SaveModelMode::kNone) return false;
    return cfg.save_model == SaveModelMode::kAll || fold == 0;
  };

  std::vector<FoldOutcome> outcomes(static_cast<std::size_t>(cfg.folds));
  if (cfg.threads <= 1) {
    for (int f = 0; f < cfg.folds; ++f)
      outcomes[static_cast<std::size_t>(f)] = run_one_fold(cfg, method, ds, plan, f, want_model(f));
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.folds));
    const int workers = std::min(cfg.threads, cfg.folds);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int f = next.fetch_add(1); f < cfg.folds; f = next.fetch_add(1)) {
          try {
            outcomes[static_cast<std::size_t>(f)] =
                run_one_fold(cfg, method, ds, plan, f, want_model(f));
          } catch (...) {
            errors[static_cast<std::size_t>(f)] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  EvalReport report;
  report.method = method;
  double acc = 0.0, sens = 0.0, spec = 0.0, secs = 0.0;
  report.min_score_seconds = outcomes.front().result.score_seconds;
  report.max_score_seconds = outcomes.front().result.score_seconds;
  for (auto& outcome : outcomes) {
    FoldResult& fr = outcome.result;
    report.cumulative += fr.cm;
    acc += fr.report.accuracy.value_or(0.0);
    sens += fr.report.sensitivity.value_or(0.0);
    spec += fr.report.specificity.value_or(0.0);
    secs += fr.score_seconds;
    report.min_score_seconds = std::min(report.min_score_seconds, fr.score_seconds);
    report.max_score_seconds = std::max(report.max_score_seconds, fr.score_seconds);
    report.warnings.insert(report.warnings.end(), outcome.warnings.begin(),
                           outcome.warnings.end());
    report.notes.insert(report.notes.end(), outcome.notes.begin(), outcome.notes.end());
    if (outcome.model && models != nullptr) models->push_back(std::move(*outcome.model));
    report.folds.push_back(std::move(fr));
  }
  report.cumulative_metrics = metrics(report.cumulative);
  report.mean_accuracy = acc / cfg.folds;
  report.mean_sensitivity = sens / cfg.folds;
  report.mean_specificity = spec / cfg.folds;
  report.mean_score_seconds = secs / cfg.folds;
  return report;
}

std::vector<BenchRow> benchmark_time(const std::vector<EvalReport>& reports) {
  std::vector<BenchRow> rows;
  for (const EvalReport& r : reports)
    rows.push_back({method_name(r.method), r.mean_score_seconds,
                    r.cumulative_metrics.sensitivity.value_or(0.0)});
  return rows;
}

namespace {

std::string fmt(double v, const char* spec) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string opt_fmt(const std::optional<double>& v, const char* spec) {
  return v ? fmt(*v, spec) : std::string();
}

}  // namespace

std::string render_text_report(const std::vector<EvalReport>& reports,
                               const std::vector<std::string>& class_names, int positive_class) {
  std::ostringstream os;
  os << "Average performance over folds (mean of fold metrics, 95% CI at cumulative counts)\n";
  os << "method        accuracy           sensitivity        specificity\n";
  for (const EvalReport& r : reports) {
    const auto& cm = r.cumulative_metrics;
    char line[160];
    std::snprintf(line, sizeof(line), "%-12s  %.4f \xc2\xb1 %.3f      %.4f \xc2\xb1 %.3f      %.4f \xc2\xb1 %.3f\n",
                  method_name(r.method), r.mean_accuracy,
                  cm.ci_accuracy.value_or(0.0), r.mean_sensitivity,
                  cm.ci_sensitivity.value_or(0.0), r.mean_specificity,
                  cm.ci_specificity.value_or(0.0));
    os << line;
  }
  const int neg_class = positive_class == 0 ? 1 : 0;
  const std::string pos_name = positive_class < static_cast<int>(class_names.size())
                                   ? class_names[static_cast<std::size_t>(positive_class)]
                                   : "positive";
  const std::string neg_name = neg_class < static_cast<int>(class_names.size())
                                   ? class_names[static_cast<std::size_t>(neg_class)]
                                   : "negative";
  for (const EvalReport& r : reports) {
    os << "\nCumulative confusion matrix - " << method_name(r.method) << "\n";
    os << "                      predicted " << neg_name << "   predicted " << pos_name << "\n";
    char row[160];
    std::snprintf(row, sizeof(row), "true %-12s  %12lld  %12lld\n", neg_name.c_str(),
                  r.cumulative.tn, r.cumulative.fp);
    os << row;
    std::snprintf(row, sizeof(row), "true %-12s  %12lld  %12lld\n", pos_name.c_str(),
                  r.cumulative.fn, r.cumulative.tp);
    os << row;
  }
  return os.str();
}

std::string render_metrics_csv(const std::vector<EvalReport>& reports) {
  std::ostringstream os;
  os << "method,fold,tp,fn,tn,fp,acc,sens,spec,ci_acc,ci_sens,ci_spec,score_seconds\n";
  auto row = [&](const char* name, const std::string& fold, const ConfusionMatrix& cm,
                 const MetricReport& m, double secs) {
    os << name << ',' << fold << ',' << cm.tp << ',' << cm.fn << ',' << cm.tn << ',' << cm.fp
       << ',' << opt_fmt(m.accuracy, "%.10g") << ',' << opt_fmt(m.sensitivity, "%.10g") << ','
       << opt_fmt(m.specificity, "%.10g") << ',' << opt_fmt(m.ci_accuracy, "%.10g") << ','
       << opt_fmt(m.ci_sensitivity, "%.10g") << ',' << opt_fmt(m.ci_specificity, "%.10g") << ','
       << fmt(secs, "%.6g") << '\n';
  };
  for (const EvalReport& r : reports) {
    for (const FoldResult& fr : r.folds)
      row(method_name(r.method), std::to_string(fr.fold), fr.cm, fr.report, fr.score_seconds);
    row(method_name(r.method), "all", r.cumulative, r.cumulative_metrics,
        r.mean_score_seconds);
  }
  return os.str();
}

std::string render_timing_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "method,score_seconds_mean,sensitivity\n";
  for (const BenchRow& r : rows)
    os << r.method << ',' << fmt(r.mean_seconds, "%.6g") << ',' << fmt(r.sensitivity, "%.6g")
       << '\n';
  return os.str();
}

std::vector<BenchRow> parse_timing_csv(const std::string& text) {
  std::vector<BenchRow> rows;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "method,score_seconds_mean,sensitivity")
    throw DataError("timing csv: bad header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw DataError("timing csv: malformed row '" + line + "'");
    BenchRow row;
    row.method = line.substr(0, c1);
    row.mean_seconds = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    row.sensitivity = std::stod(line.substr(c2 + 1));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace sparsewarn
