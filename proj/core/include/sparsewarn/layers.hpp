#ifndef SPARSEWARN_LAYERS_HPP
#define SPARSEWARN_LAYERS_HPP

#include <memory>
#include <string>
#include <vector>

#include "sparsewarn/dictionary.hpp"
#include "sparsewarn/rng.hpp"
#include "sparsewarn/tensor.hpp"

namespace sparsewarn {

/// One node of the sequential computation graph. Shapes are fixed at build
/// time via infer_shape; forward/backward operate on single samples.
/// backward reads out.grad and the stored input, sets in.grad and accumulates
/// parameter gradients.
class Layer {
 public:
  virtual ~Layer() = default;
  virtual const char* kind() const = 0;
  virtual std::string describe() const { return kind(); }

  virtual void infer_shape(int in_rows, int in_cols, int in_channels) = 0;
  int out_rows() const { return out_rows_; }
  int out_cols() const { return out_cols_; }
  int out_channels() const { return out_channels_; }

  virtual void forward(const Tensor& in, Tensor& out) = 0;
  virtual void backward(Tensor& in, const Tensor& out) = 0;

  virtual std::vector<double>* params() { return nullptr; }
  virtual std::vector<double>* param_grads() { return nullptr; }
  virtual void init_params(Rng&) {}
  int param_count() const {
    auto* p = const_cast<Layer*>(this)->params();
    return p ? static_cast<int>(p->size()) : 0;
  }

 protected:
  int out_rows_ = 0, out_cols_ = 0, out_channels_ = 0;
};

/// Stride-1 convolution with same-size zero padding. Weight layout matches
/// the im2col column order: w[((dr*kw + dc)*in_ch + i)*out_ch + k].
class Conv2dLayer : public Layer {
 public:
  Conv2dLayer(int kernel_rows, int kernel_cols, int in_channels, int out_channels);
  const char* kind() const override { return "conv2d"; }
  std::string describe() const override;
  void infer_shape(int in_rows, int in_cols, int in_channels) override;
  void forward(const Tensor& in, Tensor& out) override;
  void backward(Tensor& in, const Tensor& out) override;
  std::vector<double>* params() override { return &weights_; }
  std::vector<double>* param_grads() override { return &weight_grads_; }
  void init_params(Rng& rng) override;

  int kernel_rows() const { return kh_; }
  int kernel_cols() const { return kw_; }
  int in_channels() const { return in_ch_; }

 private:
  void build_columns(const Tensor& in);
  int kh_, kw_, in_ch_, out_ch_;
  int in_rows_ = 0, in_cols_ = 0;
  std::vector<double> weights_;       // kh*kw*in_ch*out_ch kernel then out_ch bias
  std::vector<double> weight_grads_;
  std::vector<double> columns_;       // (rows*cols) x (kh*kw*in_ch) scratch
};

class ReluLayer : public Layer {
 public:
  const char* kind() const override { return "relu"; }
  void infer_shape(int in_rows, int in_cols, int in_channels) override;
  void forward(const Tensor& in, Tensor& out) override;
  void backward(Tensor& in, const Tensor& out) override;
};

/// 2x2 stride-2 max pooling. With pad_odd set, odd spatial dims are
/// zero-padded at the bottom/right before pooling; gradient to padding cells
/// is dropped. Ties route the gradient to the first maximal element in scan
/// order.
class MaxPoolLayer : public Layer {
 public:
  explicit MaxPoolLayer(bool pad_odd);
  const char* kind() const override { return "maxpool"; }
  std::string describe() const override;
  void infer_shape(int in_rows, int in_cols, int in_channels) override;
  void forward(const Tensor& in, Tensor& out) override;
  void backward(Tensor& in, const Tensor& out) override;

 private:
  bool pad_odd_;
  int in_rows_ = 0, in_cols_ = 0;
  std::vector<int> argmax_;  // flat input index per output cell, -1 for padding
};

/// Stride-2 transposed convolution with fixed target output size (the
/// upsampled map is cropped to out_rows x out_cols).
class TransposedConv2dLayer : public Layer {
 public:
  TransposedConv2dLayer(int kernel_rows, int kernel_cols, int in_channels, int out_channels,
                        int target_rows, int target_cols);
  const char* kind() const override { return "transposed_conv2d"; }
  std::string describe() const override;
  void infer_shape(int in_rows, int in_cols, int in_channels) override;
  void forward(const Tensor& in, Tensor& out) override;
  void backward(Tensor& in, const Tensor& out) override;
  std::vector<double>* params() override { return &weights_; }
  std::vector<double>* param_grads() override { return &weight_grads_; }
  void init_params(Rng& rng) override;

 private:
  int kh_, kw_, in_ch_, out_ch_, target_rows_, target_cols_;
  int in_rows_ = 0, in_cols_ = 0;
  std::vector<double> weights_;  // kh*kw*in_ch*out_ch kernel then out_ch bias
  std::vector<double> weight_grads_;
};

class DenseLayer : public Layer {
 public:
  DenseLayer(int in_dim, int out_dim);
  const char* kind() const override { return "dense"; }
  std::string describe() const override;
  void infer_shape(int in_rows, int in_cols, int in_channels) override;
  void forward(const Tensor& in, Tensor& out) override;
  void backward(Tensor& in, const Tensor& out) override;
  std::vector<double>* params() override { return &weights_; }
  std::vector<double>* param_grads() override { return &weight_grads_; }
  void init_params(Rng& rng) override;

  /// Overwrites the weight matrix (row-major out_dim x in_dim) and zeroes the
  /// bias; used for the projection-initialized first layer.
  void set_weights(const Eigen::MatrixXd& weight_matrix);

 private:
  int in_dim_, out_dim_;
  std::vector<double> weights_;  // out*in kernel then out bias
  std::vector<double> weight_grads_;
};

/// Mean over each class's plane block; emits one value per class.
class ClassAvgPoolLayer : public Layer {
 public:
  explicit ClassAvgPoolLayer(const PlaneLayout& layout);
  const char* kind() const override { return "class_avgpool"; }
  std::string describe() const override;
  void infer_shape(int in_rows, int in_cols, int in_channels) override;
  void forward(const Tensor& in, Tensor& out) override;
  void backward(Tensor& in, const Tensor& out) override;

  const PlaneLayout& layout() const { return layout_; }

 private:
  PlaneLayout layout_;
};

class SoftmaxLayer : public Layer {
 public:
  const char* kind() const override { return "softmax"; }
  void infer_shape(int in_rows, int in_cols, int in_channels) override;
  void forward(const Tensor& in, Tensor& out) override;
  void backward(Tensor& in, const Tensor& out) override;
};

}  // namespace sparsewarn

#endif
