#ifndef SPARSEWARN_TRAIN_HPP
#define SPARSEWARN_TRAIN_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sparsewarn/errors.hpp"
#include "sparsewarn/network.hpp"

namespace sparsewarn {

struct TrainConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  int epochs = 15;
  int batch_size = 32;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainResult {
  std::vector<double> epoch_loss;  // mean cross-entropy per epoch
};

/// Thrown when the loss goes non-finite; carries the loss history so far.
struct TrainingDiverged : NumericError {
  TrainingDiverged(const std::string& msg, std::vector<double> history_so_far)
      : NumericError(msg), history(std::move(history_so_far)) {}
  std::vector<double> history;
};

/// Mini-batch Adam on cross-entropy. Shuffling and update order are fully
/// determined by cfg.seed; parameters are updated in place and bit-identical
/// across reruns on one thread. lr 0 leaves parameters untouched.
TrainResult train(Network& net, const std::vector<Tensor>& inputs,
                  const std::vector<int>& labels, const TrainConfig& cfg);

struct GradientCheckReport {
  double max_rel_error = 0.0;
  std::map<std::string, double> per_kind;  // layer kind -> max rel error
};

/// Central-difference check of the analytic parameter gradients at (input,
/// label), sampling up to 200 parameters per layer. Relative error uses
/// denominator max(|analytic|, |numeric|, 1e-8).
GradientCheckReport gradient_check(Network& net, const Tensor& input, int label,
                                   double epsilon);

/// Thresholds a probability plane at tau (entries expected in [0,1]) and maps
/// the surviving cells back to atom indices through the plane bijection.
std::vector<int> support_estimate(const Eigen::MatrixXd& prob_map, const PlaneLayout& layout,
                                  double tau);

}  // namespace sparsewarn

#endif
