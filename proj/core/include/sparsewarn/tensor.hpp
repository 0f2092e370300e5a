#ifndef SPARSEWARN_TENSOR_HPP
#define SPARSEWARN_TENSOR_HPP

#include <vector>

namespace sparsewarn {

/// Dense HWC tensor with a matching gradient buffer. Flat vectors use
/// (len, 1, 1). Index layout: (row * cols + col) * channels + channel.
struct Tensor {
  int rows = 0;
  int cols = 0;
  int channels = 0;
  std::vector<double> values;
  std::vector<double> grad;

  static Tensor zeros(int rows, int cols, int channels);
  static Tensor flat(int length);

  int size() const { return rows * cols * channels; }

  double& at(int r, int c, int ch) { return values[idx(r, c, ch)]; }
  double at(int r, int c, int ch) const { return values[idx(r, c, ch)]; }
  double& grad_at(int r, int c, int ch) { return grad[idx(r, c, ch)]; }

  std::size_t idx(int r, int c, int ch) const {
    return (static_cast<std::size_t>(r) * cols + c) * channels + ch;
  }

  void zero_grad();
  bool values_finite() const;
};

}  // namespace sparsewarn

#endif
