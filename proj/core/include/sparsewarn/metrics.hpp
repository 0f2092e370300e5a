#ifndef SPARSEWARN_METRICS_HPP
#define SPARSEWARN_METRICS_HPP

#include <optional>
#include <vector>

namespace sparsewarn {

/// Binary counts; the positive class is the early-stage case.
struct ConfusionMatrix {
  long long tp = 0;
  long long fn = 0;
  long long tn = 0;
  long long fp = 0;

  long long n_pos() const { return tp + fn; }
  long long n_neg() const { return tn + fp; }
  long long n_total() const { return tp + fn + tn + fp; }

  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

/// 1.96 * sqrt(p (1-p) / n), the 95% normal-approximation half-width.
double confidence_interval(double p, long long n);

/// Rates with their CI half-widths. A metric whose class is empty is absent
/// rather than zero.
struct MetricReport {
  std::optional<double> accuracy;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> ci_accuracy;
  std::optional<double> ci_sensitivity;
  std::optional<double> ci_specificity;
  long long n_total = 0;
  long long n_pos = 0;
  long long n_neg = 0;
};

/// sensitivity = tp/(tp+fn), specificity = tn/(tn+fp), accuracy over the
/// total; each CI uses its own metric's sample count.
MetricReport metrics(const ConfusionMatrix& cm);

/// Counts from aligned truth/prediction label sequences.
ConfusionMatrix confusion_from_predictions(const std::vector<int>& truth,
                                           const std::vector<int>& predicted,
                                           int positive_class);

}  // namespace sparsewarn

#endif
