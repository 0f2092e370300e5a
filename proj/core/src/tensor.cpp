#include "sparsewarn/tensor.hpp"

#include <cmath>

namespace sparsewarn {

Tensor Tensor::zeros(int rows, int cols, int channels) {
  Tensor t;
  t.rows = rows;
  t.cols = cols;
  t.channels = channels;
  t.values.assign(static_cast<std::size_t>(t.size()), 0.0);
  t.grad.assign(static_cast<std::size_t>(t.size()), 0.0);
  return t;
}

Tensor Tensor::flat(int length) { return zeros(length, 1, 1); }

void Tensor::zero_grad() { grad.assign(grad.size(), 0.0); }

bool Tensor::values_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace sparsewarn
