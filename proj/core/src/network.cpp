#include "sparsewarn/network.hpp"

#include <cmath>
#include <sstream>

#include "sparsewarn/errors.hpp"

namespace sparsewarn {

Network::Network(int in_rows, int in_cols, int in_channels)
    : in_rows_(in_rows), in_cols_(in_cols), in_channels_(in_channels) {}

void Network::add(std::unique_ptr<Layer> layer) {
  int r = in_rows_, c = in_cols_, ch = in_channels_;
  if (!layers_.empty()) {
    const Layer& last = *layers_.back();
    r = last.out_rows();
    c = last.out_cols();
    ch = last.out_channels();
  }
  layer->infer_shape(r, c, ch);
  layers_.push_back(std::move(layer));
  activations_.clear();
}

long long Network::param_count() const {
  long long total = 0;
  for (const auto& l : layers_) total += l->param_count();
  return total;
}

int Network::num_outputs() const {
  if (layers_.empty()) return 0;
  const Layer& last = *layers_.back();
  return last.out_rows() * last.out_cols() * last.out_channels();
}

void Network::ensure_buffers() {
  if (activations_.size() == layers_.size() + 1) return;
  activations_.clear();
  activations_.push_back(Tensor::zeros(in_rows_, in_cols_, in_channels_));
  for (const auto& l : layers_)
    activations_.push_back(Tensor::zeros(l->out_rows(), l->out_cols(), l->out_channels()));
}

Eigen::VectorXd Network::forward(const Tensor& input) {
  if (input.rows != in_rows_ || input.cols != in_cols_ || input.channels != in_channels_)
    throw NumericError("network: input shape mismatch");
  ensure_buffers();
  activations_[0].values = input.values;
  if (!activations_[0].values_finite())
    throw NumericError("network: non-finite input");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    layers_[i]->forward(activations_[i], activations_[i + 1]);
    if (!activations_[i + 1].values_finite())
      throw NumericError("network: non-finite activation after layer " + std::to_string(i) +
                         " (" + layers_[i]->kind() + ")");
  }
  const Tensor& out = activations_.back();
  return Eigen::Map<const Eigen::VectorXd>(out.values.data(),
                                           static_cast<Eigen::Index>(out.values.size()));
}

Eigen::MatrixXd Network::forward_map(const Tensor& input) {
  forward(input);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (std::string_view(layers_[i]->kind()) == "class_avgpool") {
      const Tensor& map = activations_[i];
      Eigen::MatrixXd out(map.rows, map.cols);
      for (int r = 0; r < map.rows; ++r)
        for (int c = 0; c < map.cols; ++c) out(r, c) = map.at(r, c, 0);
      return out;
    }
  }
  throw NumericError("network: no class_avgpool layer, no support map to extract");
}

double Network::forward_loss(const Tensor& input, int label) {
  const Eigen::VectorXd probs = forward(input);
  if (label < 0 || label >= probs.size())
    throw NumericError("network: label out of range");
  return -std::log(std::max(probs(label), 1e-300));
}

void Network::backward_from_label(int label) {
  if (activations_.size() != layers_.size() + 1)
    throw NumericError("network: backward requires a preceding forward pass");
  if (layers_.empty() || std::string_view(layers_.back()->kind()) != "softmax")
    throw NumericError("network: fused cross-entropy backward needs a softmax output layer");

  // d(xent)/d(logits) = p - onehot, bypassing the softmax layer itself.
  Tensor& probs = activations_.back();
  Tensor& logits = activations_[activations_.size() - 2];
  for (std::size_t i = 0; i < logits.grad.size(); ++i)
    logits.grad[i] = probs.values[i] - (static_cast<int>(i) == label ? 1.0 : 0.0);

  for (std::size_t i = layers_.size() - 1; i-- > 0;) {
    layers_[i]->backward(activations_[i], activations_[i + 1]);
    for (double g : activations_[i].grad)
      if (!std::isfinite(g))
        throw NumericError("network: non-finite gradient below layer " + std::to_string(i) +
                           " (" + layers_[i]->kind() + ")");
  }
}

void Network::zero_param_grads() {
  for (auto& l : layers_) {
    auto* g = l->param_grads();
    if (g != nullptr) std::fill(g->begin(), g->end(), 0.0);
  }
}

std::vector<Layer*> Network::trainable_layers() {
  std::vector<Layer*> out;
  for (auto& l : layers_)
    if (l->params() != nullptr) out.push_back(l.get());
  return out;
}

std::string Network::manifest() const {
  std::ostringstream os;
  os << "input " << in_rows_ << "x" << in_cols_ << "x" << in_channels_ << "\n";
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = *layers_[i];
    os << "layer " << i << ": " << l.describe() << " -> " << l.out_rows() << "x" << l.out_cols()
       << "x" << l.out_channels() << " params " << l.param_count() << "\n";
  }
  os << "param_count " << param_count() << "\n";
  return os.str();
}

std::vector<double> Network::export_params() const {
  std::vector<double> blob;
  for (const auto& l : layers_) {
    auto* p = const_cast<Layer&>(*l).params();
    if (p != nullptr) blob.insert(blob.end(), p->begin(), p->end());
  }
  return blob;
}

void Network::import_params(const std::vector<double>& blob) {
  std::size_t offset = 0;
  for (auto& l : layers_) {
    auto* p = l->params();
    if (p == nullptr) continue;
    if (offset + p->size() > blob.size())
      throw DataError("network: parameter blob too short for the layer manifest");
    std::copy(blob.begin() + static_cast<std::ptrdiff_t>(offset),
              blob.begin() + static_cast<std::ptrdiff_t>(offset + p->size()), p->begin());
    offset += p->size();
  }
  if (offset != blob.size())
    throw DataError("network: parameter blob length does not match the layer manifest");
}

}  // namespace sparsewarn
