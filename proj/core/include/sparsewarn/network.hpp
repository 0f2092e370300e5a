#ifndef SPARSEWARN_NETWORK_HPP
#define SPARSEWARN_NETWORK_HPP

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sparsewarn/dictionary.hpp"
#include "sparsewarn/layers.hpp"
#include "sparsewarn/pca.hpp"
#include "sparsewarn/tensor.hpp"

namespace sparsewarn {

/// Sequential computation graph with per-layer activation storage. One
/// instance trains on one thread; trained instances are read-only for
/// inference except for the activation scratch, so concurrent inference
/// should clone or guard instances.
class Network {
 public:
  Network(int in_rows, int in_cols, int in_channels);

  void add(std::unique_ptr<Layer> layer);
  void set_plane(const PlaneLayout& layout) { plane_ = layout; }
  const std::optional<PlaneLayout>& plane() const { return plane_; }

  int num_layers() const { return static_cast<int>(layers_.size()); }
  Layer& layer(int i) { return *layers_[static_cast<std::size_t>(i)]; }
  const Layer& layer(int i) const { return *layers_[static_cast<std::size_t>(i)]; }

  long long param_count() const;

  int in_rows() const { return in_rows_; }
  int in_cols() const { return in_cols_; }
  int in_channels() const { return in_channels_; }
  int num_outputs() const;

  /// Full forward pass; returns the class probabilities (post-softmax),
  /// guarding every activation for finiteness.
  Eigen::VectorXd forward(const Tensor& input);

  /// Activation map feeding the class_avgpool layer (the support-probability
  /// plane of the estimator networks). Runs a forward pass.
  Eigen::MatrixXd forward_map(const Tensor& input);

  /// Cross-entropy of the forward pass against `label`.
  double forward_loss(const Tensor& input, int label);

  /// Backpropagates the fused softmax-cross-entropy gradient of the last
  /// forward pass. Parameter gradients accumulate until zero_param_grads.
  void backward_from_label(int label);

  void zero_param_grads();
  std::vector<Layer*> trainable_layers();

  /// Text manifest: one line per layer with shapes and parameter counts.
  std::string manifest() const;

  /// Flattened parameter vector round-trip, used by the model container.
  std::vector<double> export_params() const;
  void import_params(const std::vector<double>& blob);

 private:
  void ensure_buffers();
  int in_rows_, in_cols_, in_channels_;
  std::vector<std::unique_ptr<Layer>> layers_;
  std::vector<Tensor> activations_;  // activations_[0] is the input
  std::optional<PlaneLayout> plane_;
};

/// Two hidden conv layers (48 and 24 maps, 3x3) plus the single-map output
/// conv, class-block average pooling and softmax; 11 089 parameters on any
/// plane.
Network build_csen1(const PlaneLayout& plane, std::uint64_t init_seed = 0);

/// Adds 2x2 max pooling and a stride-2 transposed conv stage; 16 297
/// parameters. Odd plane dimensions are a build error unless pad_odd is set,
/// in which case pooling zero-pads and the transposed conv output is cropped
/// back to the plane size.
Network build_csen2(const PlaneLayout& plane, bool pad_odd = false,
                    std::uint64_t init_seed = 0);

/// Six fully convolutional layers (11x11/1x1/7x7 twice) adapted to support
/// estimation with class-block average pooling; 22 914 parameters.
Network build_reconnet_se(const PlaneLayout& plane, std::uint64_t init_seed = 0);

/// Dense d->hidden[0]->hidden[1]->hidden[2]->num_classes with ReLU between
/// and softmax output. The first layer starts as the projector's basis with
/// zero bias; hidden[0] must equal the projector's output dimension.
Network build_mlp(const Projector& projector, const std::vector<int>& hidden,
                  int num_classes = 2, std::uint64_t init_seed = 0);

}  // namespace sparsewarn

#endif
