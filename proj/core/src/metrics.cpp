#include "sparsewarn/metrics.hpp"

#include <cmath>

#include "sparsewarn/errors.hpp"

namespace sparsewarn {

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  tp += other.tp;
  fn += other.fn;
  tn += other.tn;
  fp += other.fp;
  return *this;
}

double confidence_interval(double p, long long n) {
  if (p < 0.0 || p > 1.0) throw NumericError("confidence_interval: rate outside [0, 1]");
  if (n < 1) throw NumericError("confidence_interval: sample count must be at least 1");
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

MetricReport metrics(const ConfusionMatrix& cm) {
  MetricReport report;
  report.n_pos = cm.n_pos();
  report.n_neg = cm.n_neg();
  report.n_total = cm.n_total();
  if (report.n_total > 0) {
    const double acc = static_cast<double>(cm.tp + cm.tn) / report.n_total;
    report.accuracy = acc;
    report.ci_accuracy = confidence_interval(acc, report.n_total);
  }
  if (report.n_pos > 0) {
    const double sens = static_cast<double>(cm.tp) / report.n_pos;
    report.sensitivity = sens;
    report.ci_sensitivity = confidence_interval(sens, report.n_pos);
  }
  if (report.n_neg > 0) {
    const double spec = static_cast<double>(cm.tn) / report.n_neg;
    report.specificity = spec;
    report.ci_specificity = confidence_interval(spec, report.n_neg);
  }
  return report;
}

ConfusionMatrix confusion_from_predictions(const std::vector<int>& truth,
                                           const std::vector<int>& predicted,
                                           int positive_class) {
  if (truth.size() != predicted.size())
    throw NumericError("confusion_from_predictions: misaligned sequences");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool actual_pos = truth[i] == positive_class;
    const bool pred_pos = predicted[i] == positive_class;
    if (actual_pos && pred_pos) ++cm.tp;
    else if (actual_pos && !pred_pos) ++cm.fn;
    else if (!actual_pos && pred_pos) ++cm.fp;
    else ++cm.tn;
  }
  return cm;
}

}  // namespace sparsewarn
