#include "sparsewarn/layers.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsewarn/errors.hpp"

namespace sparsewarn {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMap = Eigen::Map<RowMat>;
using ConstRowMap = Eigen::Map<const RowMat>;

double glorot_limit(int fan_in, int fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

void fill_glorot(std::vector<double>& kernel, std::size_t kernel_size, double limit, Rng& rng) {
  for (std::size_t i = 0; i < kernel.size(); ++i)
    kernel[i] = i < kernel_size ? rng.next_uniform(-limit, limit) : 0.0;
}

}  // namespace

// ---------------------------------------------------------------- Conv2d

Conv2dLayer::Conv2dLayer(int kernel_rows, int kernel_cols, int in_channels, int out_channels)
    : kh_(kernel_rows), kw_(kernel_cols), in_ch_(in_channels), out_ch_(out_channels) {
  const std::size_t count =
      static_cast<std::size_t>(kh_) * kw_ * in_ch_ * out_ch_ + static_cast<std::size_t>(out_ch_);
  weights_.assign(count, 0.0);
  weight_grads_.assign(count, 0.0);
}

std::string Conv2dLayer::describe() const {
  return "conv2d " + std::to_string(kh_) + "x" + std::to_string(kw_) + " " +
         std::to_string(in_ch_) + "->" + std::to_string(out_ch_) + " stride 1 zeropad same";
}

void Conv2dLayer::infer_shape(int in_rows, int in_cols, int in_channels) {
  if (in_channels != in_ch_)
    throw NumericError("conv2d: expected " + std::to_string(in_ch_) + " input channels, got " +
                       std::to_string(in_channels));
  in_rows_ = in_rows;
  in_cols_ = in_cols;
  out_rows_ = in_rows;
  out_cols_ = in_cols;
  out_channels_ = out_ch_;
  columns_.assign(static_cast<std::size_t>(in_rows) * in_cols * kh_ * kw_ * in_ch_, 0.0);
}

void Conv2dLayer::build_columns(const Tensor& in) {
  const int positions = in_rows_ * in_cols_;
  const int k = kh_ * kw_ * in_ch_;
  const int pad_r = (kh_ - 1) / 2;
  const int pad_c = (kw_ - 1) / 2;
  std::fill(columns_.begin(), columns_.end(), 0.0);
  for (int r = 0; r < in_rows_; ++r) {
    for (int c = 0; c < in_cols_; ++c) {
      double* col = columns_.data() + (static_cast<std::size_t>(r) * in_cols_ + c) * k;
      for (int dr = 0; dr < kh_; ++dr) {
        const int rr = r + dr - pad_r;
        if (rr < 0 || rr >= in_rows_) continue;
        for (int dc = 0; dc < kw_; ++dc) {
          const int cc = c + dc - pad_c;
          if (cc < 0 || cc >= in_cols_) continue;
          const double* src = in.values.data() + in.idx(rr, cc, 0);
          std::copy(src, src + in_ch_, col + (dr * kw_ + dc) * in_ch_);
        }
      }
    }
  }
  (void)positions;
}

void Conv2dLayer::forward(const Tensor& in, Tensor& out) {
  build_columns(in);
  const int positions = in_rows_ * in_cols_;
  const int k = kh_ * kw_ * in_ch_;
  ConstRowMap cols(columns_.data(), positions, k);
  ConstRowMap kernel(weights_.data(), k, out_ch_);
  RowMap result(out.values.data(), positions, out_ch_);
  result.noalias() = cols * kernel;
  Eigen::Map<const Eigen::VectorXd> bias(weights_.data() + static_cast<std::size_t>(k) * out_ch_,
                                         out_ch_);
  result.rowwise() += bias.transpose();
}

void Conv2dLayer::backward(Tensor& in, const Tensor& out) {
  const int positions = in_rows_ * in_cols_;
  const int k = kh_ * kw_ * in_ch_;
  ConstRowMap out_grad(out.grad.data(), positions, out_ch_);
  ConstRowMap cols(columns_.data(), positions, k);

  RowMap kernel_grad(weight_grads_.data(), k, out_ch_);
  kernel_grad.noalias() += cols.transpose() * out_grad;
  Eigen::Map<Eigen::VectorXd> bias_grad(
      weight_grads_.data() + static_cast<std::size_t>(k) * out_ch_, out_ch_);
  bias_grad.noalias() += out_grad.colwise().sum().transpose();

  ConstRowMap kernel(weights_.data(), k, out_ch_);
  RowMat col_grad = out_grad * kernel.transpose();  // positions x k

  std::fill(in.grad.begin(), in.grad.end(), 0.0);
  const int pad_r = (kh_ - 1) / 2;
  const int pad_c = (kw_ - 1) / 2;
  for (int r = 0; r < in_rows_; ++r) {
    for (int c = 0; c < in_cols_; ++c) {
      const double* g = col_grad.data() + (static_cast<std::size_t>(r) * in_cols_ + c) * k;
      for (int dr = 0; dr < kh_; ++dr) {
        const int rr = r + dr - pad_r;
        if (rr < 0 || rr >= in_rows_) continue;
        for (int dc = 0; dc < kw_; ++dc) {
          const int cc = c + dc - pad_c;
          if (cc < 0 || cc >= in_cols_) continue;
          double* dst = in.grad.data() + in.idx(rr, cc, 0);
          const double* src = g + (dr * kw_ + dc) * in_ch_;
          for (int i = 0; i < in_ch_; ++i) dst[i] += src[i];
        }
      }
    }
  }
}

void Conv2dLayer::init_params(Rng& rng) {
  const std::size_t kernel_size = static_cast<std::size_t>(kh_) * kw_ * in_ch_ * out_ch_;
  fill_glorot(weights_, kernel_size, glorot_limit(kh_ * kw_ * in_ch_, kh_ * kw_ * out_ch_), rng);
}

// ---------------------------------------------------------------- Relu

void ReluLayer::infer_shape(int in_rows, int in_cols, int in_channels) {
  out_rows_ = in_rows;
  out_cols_ = in_cols;
  out_channels_ = in_channels;
}

void ReluLayer::forward(const Tensor& in, Tensor& out) {
  for (std::size_t i = 0; i < in.values.size(); ++i)
    out.values[i] = in.values[i] > 0.0 ? in.values[i] : 0.0;
}

void ReluLayer::backward(Tensor& in, const Tensor& out) {
  for (std::size_t i = 0; i < in.values.size(); ++i)
    in.grad[i] = in.values[i] > 0.0 ? out.grad[i] : 0.0;
}

// ---------------------------------------------------------------- MaxPool

MaxPoolLayer::MaxPoolLayer(bool pad_odd) : pad_odd_(pad_odd) {}

std::string MaxPoolLayer::describe() const {
  return pad_odd_ ? "maxpool 2x2 stride 2 (zero-pads odd input)" : "maxpool 2x2 stride 2";
}

void MaxPoolLayer::infer_shape(int in_rows, int in_cols, int in_channels) {
  if (!pad_odd_ && (in_rows % 2 != 0 || in_cols % 2 != 0))
    throw NumericError("maxpool: input " + std::to_string(in_rows) + "x" +
                       std::to_string(in_cols) +
                       " not divisible by 2; use the zero-padded variant");
  in_rows_ = in_rows;
  in_cols_ = in_cols;
  out_rows_ = (in_rows + 1) / 2;
  out_cols_ = (in_cols + 1) / 2;
  out_channels_ = in_channels;
  argmax_.assign(static_cast<std::size_t>(out_rows_) * out_cols_ * out_channels_, -1);
}

void MaxPoolLayer::forward(const Tensor& in, Tensor& out) {
  for (int r = 0; r < out_rows_; ++r) {
    for (int c = 0; c < out_cols_; ++c) {
      for (int ch = 0; ch < out_channels_; ++ch) {
        double best = -std::numeric_limits<double>::infinity();
        int best_idx = -1;
        for (int dr = 0; dr < 2; ++dr) {
          for (int dc = 0; dc < 2; ++dc) {
            const int rr = 2 * r + dr;
            const int cc = 2 * c + dc;
            const bool pad = rr >= in_rows_ || cc >= in_cols_;
            const double v = pad ? 0.0 : in.at(rr, cc, ch);
            if (v > best) {
              best = v;
              best_idx = pad ? -1 : static_cast<int>(in.idx(rr, cc, ch));
            }
          }
        }
        out.at(r, c, ch) = best;
        argmax_[out.idx(r, c, ch)] = best_idx;
      }
    }
  }
}

void MaxPoolLayer::backward(Tensor& in, const Tensor& out) {
  std::fill(in.grad.begin(), in.grad.end(), 0.0);
  for (std::size_t i = 0; i < out.grad.size(); ++i) {
    const int src = argmax_[i];
    if (src >= 0) in.grad[static_cast<std::size_t>(src)] += out.grad[i];
  }
}

// ------------------------------------------------------ TransposedConv2d

TransposedConv2dLayer::TransposedConv2dLayer(int kernel_rows, int kernel_cols, int in_channels,
                                             int out_channels, int target_rows, int target_cols)
    : kh_(kernel_rows),
      kw_(kernel_cols),
      in_ch_(in_channels),
      out_ch_(out_channels),
      target_rows_(target_rows),
      target_cols_(target_cols) {
  const std::size_t count =
      static_cast<std::size_t>(kh_) * kw_ * in_ch_ * out_ch_ + static_cast<std::size_t>(out_ch_);
  weights_.assign(count, 0.0);
  weight_grads_.assign(count, 0.0);
}

std::string TransposedConv2dLayer::describe() const {
  return "transposed_conv2d " + std::to_string(kh_) + "x" + std::to_string(kw_) + " " +
         std::to_string(in_ch_) + "->" + std::to_string(out_ch_) + " stride 2 crop to " +
         std::to_string(target_rows_) + "x" + std::to_string(target_cols_);
}

void TransposedConv2dLayer::infer_shape(int in_rows, int in_cols, int in_channels) {
  if (in_channels != in_ch_)
    throw NumericError("transposed_conv2d: expected " + std::to_string(in_ch_) +
                       " input channels, got " + std::to_string(in_channels));
  if (target_rows_ > 2 * in_rows + 1 || target_cols_ > 2 * in_cols + 1)
    throw NumericError("transposed_conv2d: target size exceeds the upsampled extent");
  in_rows_ = in_rows;
  in_cols_ = in_cols;
  out_rows_ = target_rows_;
  out_cols_ = target_cols_;
  out_channels_ = out_ch_;
}

void TransposedConv2dLayer::forward(const Tensor& in, Tensor& out) {
  Eigen::Map<const Eigen::VectorXd> bias(
      weights_.data() + static_cast<std::size_t>(kh_) * kw_ * in_ch_ * out_ch_, out_ch_);
  for (int r = 0; r < out_rows_; ++r)
    for (int c = 0; c < out_cols_; ++c)
      Eigen::Map<Eigen::VectorXd>(out.values.data() + out.idx(r, c, 0), out_ch_) = bias;

  const int pad = (kh_ - 1) / 2;
  for (int ri = 0; ri < in_rows_; ++ri) {
    for (int ci = 0; ci < in_cols_; ++ci) {
      Eigen::Map<const Eigen::VectorXd> in_vec(in.values.data() + in.idx(ri, ci, 0), in_ch_);
      for (int dr = 0; dr < kh_; ++dr) {
        const int ro = 2 * ri + dr - pad;
        if (ro < 0 || ro >= out_rows_) continue;
        for (int dc = 0; dc < kw_; ++dc) {
          const int co = 2 * ci + dc - pad;
          if (co < 0 || co >= out_cols_) continue;
          ConstRowMap tap(weights_.data() + (static_cast<std::size_t>(dr) * kw_ + dc) * in_ch_ * out_ch_,
                          in_ch_, out_ch_);
          Eigen::Map<Eigen::VectorXd> out_vec(out.values.data() + out.idx(ro, co, 0), out_ch_);
          out_vec.noalias() += tap.transpose() * in_vec;
        }
      }
    }
  }
}

void TransposedConv2dLayer::backward(Tensor& in, const Tensor& out) {
  std::fill(in.grad.begin(), in.grad.end(), 0.0);
  Eigen::Map<Eigen::VectorXd> bias_grad(
      weight_grads_.data() + static_cast<std::size_t>(kh_) * kw_ * in_ch_ * out_ch_, out_ch_);
  for (int r = 0; r < out_rows_; ++r)
    for (int c = 0; c < out_cols_; ++c)
      bias_grad += Eigen::Map<const Eigen::VectorXd>(out.grad.data() + out.idx(r, c, 0), out_ch_);

  const int pad = (kh_ - 1) / 2;
  for (int ri = 0; ri < in_rows_; ++ri) {
    for (int ci = 0; ci < in_cols_; ++ci) {
      Eigen::Map<const Eigen::VectorXd> in_vec(in.values.data() + in.idx(ri, ci, 0), in_ch_);
      Eigen::Map<Eigen::VectorXd> in_grad_vec(in.grad.data() + in.idx(ri, ci, 0), in_ch_);
      for (int dr = 0; dr < kh_; ++dr) {
        const int ro = 2 * ri + dr - pad;
        if (ro < 0 || ro >= out_rows_) continue;
        for (int dc = 0; dc < kw_; ++dc) {
          const int co = 2 * ci + dc - pad;
          if (co < 0 || co >= out_cols_) continue;
          const std::size_t base = (static_cast<std::size_t>(dr) * kw_ + dc) * in_ch_ * out_ch_;
          ConstRowMap tap(weights_.data() + base, in_ch_, out_ch_);
          RowMap tap_grad(weight_grads_.data() + base, in_ch_, out_ch_);
          Eigen::Map<const Eigen::VectorXd> out_grad_vec(out.grad.data() + out.idx(ro, co, 0),
                                                         out_ch_);
          in_grad_vec.noalias() += tap * out_grad_vec;
          tap_grad.noalias() += in_vec * out_grad_vec.transpose();
        }
      }
    }
  }
}

void TransposedConv2dLayer::init_params(Rng& rng) {
  const std::size_t kernel_size = static_cast<std::size_t>(kh_) * kw_ * in_ch_ * out_ch_;
  fill_glorot(weights_, kernel_size, glorot_limit(kh_ * kw_ * in_ch_, kh_ * kw_ * out_ch_), rng);
}

// ---------------------------------------------------------------- Dense

DenseLayer::DenseLayer(int in_dim, int out_dim) : in_dim_(in_dim), out_dim_(out_dim) {
  const std::size_t count =
      static_cast<std::size_t>(in_dim_) * out_dim_ + static_cast<std::size_t>(out_dim_);
  weights_.assign(count, 0.0);
  weight_grads_.assign(count, 0.0);
}

std::string DenseLayer::describe() const {
  return "dense " + std::to_string(in_dim_) + "->" + std::to_string(out_dim_);
}

void DenseLayer::infer_shape(int in_rows, int in_cols, int in_channels) {
  if (in_rows * in_cols * in_channels != in_dim_)
    throw NumericError("dense: input size " + std::to_string(in_rows * in_cols * in_channels) +
                       " does not match layer input dimension " + std::to_string(in_dim_));
  out_rows_ = out_dim_;
  out_cols_ = 1;
  out_channels_ = 1;
}

void DenseLayer::forward(const Tensor& in, Tensor& out) {
  ConstRowMap weight(weights_.data(), out_dim_, in_dim_);
  Eigen::Map<const Eigen::VectorXd> bias(weights_.data() + static_cast<std::size_t>(out_dim_) * in_dim_,
                                         out_dim_);
  Eigen::Map<const Eigen::VectorXd> x(in.values.data(), in_dim_);
  Eigen::Map<Eigen::VectorXd> y(out.values.data(), out_dim_);
  y.noalias() = weight * x + bias;
}

void DenseLayer::backward(Tensor& in, const Tensor& out) {
  ConstRowMap weight(weights_.data(), out_dim_, in_dim_);
  Eigen::Map<const Eigen::VectorXd> x(in.values.data(), in_dim_);
  Eigen::Map<const Eigen::VectorXd> dy(out.grad.data(), out_dim_);

  RowMap weight_grad(weight_grads_.data(), out_dim_, in_dim_);
  weight_grad.noalias() += dy * x.transpose();
  Eigen::Map<Eigen::VectorXd> bias_grad(
      weight_grads_.data() + static_cast<std::size_t>(out_dim_) * in_dim_, out_dim_);
  bias_grad += dy;

  Eigen::Map<Eigen::VectorXd> dx(in.grad.data(), in_dim_);
  dx.noalias() = weight.transpose() * dy;
}

void DenseLayer::init_params(Rng& rng) {
  fill_glorot(weights_, static_cast<std::size_t>(in_dim_) * out_dim_,
              glorot_limit(in_dim_, out_dim_), rng);
}

void DenseLayer::set_weights(const Eigen::MatrixXd& weight_matrix) {
  if (weight_matrix.rows() != out_dim_ || weight_matrix.cols() != in_dim_)
    throw NumericError("dense: init matrix shape mismatch");
  RowMap weight(weights_.data(), out_dim_, in_dim_);
  weight = weight_matrix;
  std::fill(weights_.begin() + static_cast<std::ptrdiff_t>(out_dim_) * in_dim_, weights_.end(), 0.0);
}

// ---------------------------------------------------------- ClassAvgPool

ClassAvgPoolLayer::ClassAvgPoolLayer(const PlaneLayout& layout) : layout_(layout) {}

std::string ClassAvgPoolLayer::describe() const {
  return "class_avgpool over " + std::to_string(layout_.num_classes) + " blocks of " +
         std::to_string(layout_.block_rows) + "x" + std::to_string(layout_.block_cols);
}

void ClassAvgPoolLayer::infer_shape(int in_rows, int in_cols, int in_channels) {
  if (in_channels != 1)
    throw NumericError("class_avgpool: expects a single-channel map");
  if (in_rows != layout_.height || in_cols != layout_.width)
    throw NumericError("class_avgpool: map " + std::to_string(in_rows) + "x" +
                       std::to_string(in_cols) + " does not match plane " +
                       std::to_string(layout_.height) + "x" + std::to_string(layout_.width));
  out_rows_ = layout_.num_classes;
  out_cols_ = 1;
  out_channels_ = 1;
}

void ClassAvgPoolLayer::forward(const Tensor& in, Tensor& out) {
  const double block_size = static_cast<double>(layout_.block_rows) * layout_.block_cols;
  for (int cls = 0; cls < layout_.num_classes; ++cls) {
    double sum = 0.0;
    for (int r = 0; r < layout_.height; ++r)
      for (int c = cls * layout_.block_cols; c < (cls + 1) * layout_.block_cols; ++c)
        sum += in.at(r, c, 0);
    out.values[static_cast<std::size_t>(cls)] = sum / block_size;
  }
}

void ClassAvgPoolLayer::backward(Tensor& in, const Tensor& out) {
  const double block_size = static_cast<double>(layout_.block_rows) * layout_.block_cols;
  std::fill(in.grad.begin(), in.grad.end(), 0.0);
  for (int cls = 0; cls < layout_.num_classes; ++cls) {
    const double g = out.grad[static_cast<std::size_t>(cls)] / block_size;
    for (int r = 0; r < layout_.height; ++r)
      for (int c = cls * layout_.block_cols; c < (cls + 1) * layout_.block_cols; ++c)
        in.grad_at(r, c, 0) = g;
  }
}

// ---------------------------------------------------------------- Softmax

void SoftmaxLayer::infer_shape(int in_rows, int in_cols, int in_channels) {
  out_rows_ = in_rows * in_cols * in_channels;
  out_cols_ = 1;
  out_channels_ = 1;
}

void SoftmaxLayer::forward(const Tensor& in, Tensor& out) {
  const double peak = *std::max_element(in.values.begin(), in.values.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < in.values.size(); ++i) {
    out.values[i] = std::exp(in.values[i] - peak);
    sum += out.values[i];
  }
  for (double& v : out.values) v /= sum;
}

void SoftmaxLayer::backward(Tensor& in, const Tensor& out) {
  double dot = 0.0;
  for (std::size_t i = 0; i < out.values.size(); ++i) dot += out.grad[i] * out.values[i];
  for (std::size_t i = 0; i < in.grad.size(); ++i)
    in.grad[i] = out.values[i] * (out.grad[i] - dot);
}

}  // namespace sparsewarn
