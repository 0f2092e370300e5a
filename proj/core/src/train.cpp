#include "sparsewarn/train.hpp"

#include <cmath>

#include "sparsewarn/rng.hpp"

namespace sparsewarn {

void TrainConfig::validate() const {
  if (lr < 0.0) throw ConfigError("train: learning rate must be >= 0");
  if (beta1 <= 0.0 || beta1 >= 1.0 || beta2 <= 0.0 || beta2 >= 1.0)
    throw ConfigError("train: beta1 and beta2 must be in (0, 1)");
  if (epochs < 0 || batch_size < 1) throw ConfigError("train: bad epochs or batch size");
}

TrainResult train(Network& net, const std::vector<Tensor>& inputs,
                  const std::vector<int>& labels, const TrainConfig& cfg) {
  cfg.validate();
  if (inputs.size() != labels.size() || inputs.empty())
    throw DataError("train: inputs and labels must be non-empty and aligned");

  const auto layers = net.trainable_layers();
  std::vector<std::vector<double>> moment1, moment2;
  for (Layer* l : layers) {
    moment1.emplace_back(l->params()->size(), 0.0);
    moment2.emplace_back(l->params()->size(), 0.0);
  }
  constexpr double kAdamEps = 1e-8;

  TrainResult result;
  const int n = static_cast<int>(inputs.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;

  long long step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng(mix_seed(cfg.seed, 0x5e0ffULL + static_cast<std::uint64_t>(epoch)));
    rng.shuffle(order);

    double epoch_loss = 0.0;
    int cursor = 0;
    while (cursor < n) {
      const int batch = std::min(cfg.batch_size, n - cursor);
      net.zero_param_grads();
      double batch_loss = 0.0;
      for (int b = 0; b < batch; ++b) {
        const int idx = order[static_cast<std::size_t>(cursor + b)];
        batch_loss += net.forward_loss(inputs[static_cast<std::size_t>(idx)],
                                       labels[static_cast<std::size_t>(idx)]);
        net.backward_from_label(labels[static_cast<std::size_t>(idx)]);
      }
      epoch_loss += batch_loss;
      if (!std::isfinite(batch_loss))
        throw TrainingDiverged("train: non-finite loss at epoch " + std::to_string(epoch),
                               result.epoch_loss);

      ++step;
      const double scale = 1.0 / batch;
      const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      for (std::size_t li = 0; li < layers.size(); ++li) {
        auto& params = *layers[li]->params();
        auto& grads = *layers[li]->param_grads();
        auto& m1 = moment1[li];
        auto& m2 = moment2[li];
        for (std::size_t j = 0; j < params.size(); ++j) {
          const double g = grads[j] * scale;
          m1[j] = cfg.beta1 * m1[j] + (1.0 - cfg.beta1) * g;
          m2[j] = cfg.beta2 * m2[j] + (1.0 - cfg.beta2) * g * g;
          const double update = (m1[j] / bc1) / (std::sqrt(m2[j] / bc2) + kAdamEps);
          params[j] -= cfg.lr * update;
        }
      }
      cursor += batch;
    }
    result.epoch_loss.push_back(epoch_loss / n);
  }
  return result;
}

GradientCheckReport gradient_check(Network& net, const Tensor& input, int label,
                                   double epsilon) {
  if (epsilon < 1e-7 || epsilon > 1e-4)
    throw NumericError("gradient_check: epsilon must lie in [1e-7, 1e-4]");

  net.zero_param_grads();
  net.forward_loss(input, label);
  net.backward_from_label(label);

  GradientCheckReport report;
  Rng rng(0x9c0ffeeULL);
  for (Layer* l : net.trainable_layers()) {
    auto& params = *l->params();
    const auto& grads = *l->param_grads();
    const std::size_t count = params.size();
    const std::size_t samples = std::min<std::size_t>(count, 200);

    std::vector<std::size_t> picks(count);
    for (std::size_t i = 0; i < count; ++i) picks[i] = i;
    rng.shuffle(picks);
    picks.resize(samples);

    double worst = 0.0;
    for (std::size_t j : picks) {
      const double saved = params[j];
      params[j] = saved + epsilon;
      const double plus = net.forward_loss(input, label);
      params[j] = saved - epsilon;
      const double minus = net.forward_loss(input, label);
      params[j] = saved;

      const double numeric = (plus - minus) / (2.0 * epsilon);
      const double analytic = grads[j];
      const double rel = std::abs(analytic - numeric) /
                         std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      worst = std::max(worst, rel);
    }
    auto [it, inserted] = report.per_kind.try_emplace(l->kind(), worst);
    if (!inserted) it->second = std::max(it->second, worst);
    report.max_rel_error = std::max(report.max_rel_error, worst);
  }
  // Restore a clean forward state at the unperturbed parameters.
  net.forward_loss(input, label);
  return report;
}

std::vector<int> support_estimate(const Eigen::MatrixXd& prob_map, const PlaneLayout& layout,
                                  double tau) {
  if (tau <= 0.0 || tau >= 1.0)
    throw NumericError("support_estimate: tau must lie strictly inside (0, 1)");
  if (prob_map.rows() != layout.height || prob_map.cols() != layout.width)
    throw NumericError("support_estimate: map dimensions do not match the plane layout");

  std::vector<int> support;
  for (int atom = 0; atom < layout.num_cells(); ++atom) {
    const int cell = layout.atom_to_cell[static_cast<std::size_t>(atom)];
    if (prob_map(cell / layout.width, cell % layout.width) > tau) support.push_back(atom);
  }
  return support;
}

}  // namespace sparsewarn
