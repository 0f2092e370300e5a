#include "sparsewarn/svm.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

#include "sparsewarn/errors.hpp"

namespace sparsewarn {

namespace {

constexpr double kStopEps = 1e-3;   // maximal KKT violation at termination
constexpr int kMaxPasses = 100000;  // pair-update cap

double kernel_value(SvmKernel kernel, double gamma, int order, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& b) {
  switch (kernel) {
    case SvmKernel::kLinear:
      return a.dot(b);
    case SvmKernel::kPolynomial:
      return std::pow(1.0 + a.dot(b), order);
    case SvmKernel::kRbf:
      return std::exp(-gamma * (a - b).squaredNorm());
  }
  return 0.0;
}

// Gram rows either fully materialized (small problems) or computed on demand
// behind a bounded FIFO cache.
class KernelCache {
 public:
  KernelCache(const Eigen::MatrixXd& rows, SvmKernel kernel, double gamma, int order)
      : rows_(rows), kernel_(kernel), gamma_(gamma), order_(order) {
    const Eigen::Index n = rows_.rows();
    full_ = n <= 4096;
    if (full_) {
      if (kernel_ == SvmKernel::kLinear) {
        gram_ = rows_ * rows_.transpose();
      } else if (kernel_ == SvmKernel::kPolynomial) {
        gram_ = ((rows_ * rows_.transpose()).array() + 1.0).pow(order_);
      } else {
        const Eigen::VectorXd sq = rows_.rowwise().squaredNorm();
        gram_ = -2.0 * (rows_ * rows_.transpose());
        gram_.colwise() += sq;
        gram_.rowwise() += sq.transpose();
        gram_ = (-gamma_ * gram_.array()).exp();
      }
    } else {
      sq_ = rows_.rowwise().squaredNorm();
      max_cached_ = std::max<std::size_t>(
          16, (512ull << 20) / (sizeof(double) * static_cast<std::size_t>(n)));
    }
  }

  const Eigen::VectorXd& row(int i) {
    if (full_) {
      scratch_ = gram_.row(i).transpose();
      return scratch_;
    }
    auto it = cache_.find(i);
    if (it != cache_.end()) return it->second;
    Eigen::VectorXd r;
    if (kernel_ == SvmKernel::kLinear) {
      r = rows_ * rows_.row(i).transpose();
    } else if (kernel_ == SvmKernel::kPolynomial) {
      r = ((rows_ * rows_.row(i).transpose()).array() + 1.0).pow(order_);
    } else {
      r = (-gamma_ * ((-2.0 * (rows_ * rows_.row(i).transpose())).array() + sq_.array() + sq_(i)))
              .exp();
    }
    if (cache_.size() >= max_cached_) {
      cache_.erase(insertion_order_.front());
      insertion_order_.pop_front();
    }
    insertion_order_.push_back(i);
    return cache_.emplace(i, std::move(r)).first->second;
  }

  double diag(int i) {
    if (full_) return gram_(i, i);
    return kernel_value(kernel_, gamma_, order_, rows_.row(i).transpose(),
                        rows_.row(i).transpose());
  }

 private:
  const Eigen::MatrixXd& rows_;
  SvmKernel kernel_;
  double gamma_;
  int order_;
  bool full_ = false;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd scratch_;
  Eigen::VectorXd sq_;
  std::unordered_map<int, Eigen::VectorXd> cache_;
  std::deque<int> insertion_order_;
  std::size_t max_cached_ = 0;
};

}  // namespace

const char* svm_kernel_name(SvmKernel kernel) {
  switch (kernel) {
    case SvmKernel::kLinear: return "linear";
    case SvmKernel::kPolynomial: return "polynomial";
    case SvmKernel::kRbf: return "rbf";
  }
  return "?";
}

SvmKernel svm_kernel_from_name(const std::string& name) {
  if (name == "linear") return SvmKernel::kLinear;
  if (name == "polynomial" || name == "poly") return SvmKernel::kPolynomial;
  if (name == "rbf") return SvmKernel::kRbf;
  throw ConfigError("unknown SVM kernel '" + name + "'");
}

double SvmModel::decision(const Eigen::VectorXd& x) const {
  double f = bias;
  for (Eigen::Index i = 0; i < support_vectors.rows(); ++i)
    f += dual_coeffs(i) *
         kernel_value(kernel, gamma, poly_order, support_vectors.row(i).transpose(), x);
  return f;
}

SvmModel svm_train(const FeatureDataset& train, SvmKernel kernel, double C,
                   double gamma_or_order) {
  if (C <= 0.0) throw ConfigError("svm_train: C must be positive");
  if (train.num_classes() != 2)
    throw DataError("svm_train: binary labels required, got " +
                    std::to_string(train.num_classes()) + " classes");

  const int n = train.num_samples();
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = train.labels[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;

  const int order = kernel == SvmKernel::kPolynomial
                        ? static_cast<int>(std::lround(gamma_or_order))
                        : 3;
  const double gamma = kernel == SvmKernel::kRbf ? gamma_or_order : 1.0;
  if (kernel == SvmKernel::kRbf && gamma <= 0.0)
    throw ConfigError("svm_train: rbf gamma must be positive");

  KernelCache cache(train.samples, kernel, gamma, order);

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);  // d/dalpha of the dual objective

  bool converged = false;
  int iter = 0;
  double upper = 0.0, lower = 0.0;
  for (; iter < kMaxPasses; ++iter) {
    // Maximal-violating pair.
    int i = -1, j = -1;
    upper = -std::numeric_limits<double>::infinity();
    lower = std::numeric_limits<double>::infinity();
    for (int t = 0; t < n; ++t) {
      const bool in_up = (y(t) > 0 && alpha(t) < C) || (y(t) < 0 && alpha(t) > 0);
      const bool in_low = (y(t) > 0 && alpha(t) > 0) || (y(t) < 0 && alpha(t) < C);
      const double v = -y(t) * grad(t);
      if (in_up && v > upper) {
        upper = v;
        i = t;
      }
      if (in_low && v < lower) {
        lower = v;
        j = t;
      }
    }
    if (i < 0 || j < 0 || upper - lower <= kStopEps) {
      converged = true;
      break;
    }

    const Eigen::VectorXd& row_i = cache.row(i);
    const Eigen::VectorXd k_i = row_i;  // copy: row j below may evict it
    const Eigen::VectorXd& k_j = cache.row(j);

    const double old_ai = alpha(i);
    const double old_aj = alpha(j);
    if (y(i) != y(j)) {
      double quad = cache.diag(i) + cache.diag(j) + 2.0 * k_i(j);
      if (quad <= 0.0) quad = 1e-12;
      const double delta = (-grad(i) - grad(j)) / quad;
      const double diff = alpha(i) - alpha(j);
      alpha(i) += delta;
      alpha(j) += delta;
      if (diff > 0.0 && alpha(j) < 0.0) {
        alpha(j) = 0.0;
        alpha(i) = diff;
      } else if (diff <= 0.0 && alpha(i) < 0.0) {
        alpha(i) = 0.0;
        alpha(j) = -diff;
      }
      if (diff > 0.0 && alpha(i) > C) {
        alpha(i) = C;
        alpha(j) = C - diff;
      } else if (diff <= 0.0 && alpha(j) > C) {
        alpha(j) = C;
        alpha(i) = C + diff;
      }
    } else {
      double quad = cache.diag(i) + cache.diag(j) - 2.0 * k_i(j);
      if (quad <= 0.0) quad = 1e-12;
      const double delta = (grad(i) - grad(j)) / quad;
      const double sum = alpha(i) + alpha(j);
      alpha(i) -= delta;
      alpha(j) += delta;
      if (sum > C) {
        if (alpha(i) > C) {
          alpha(i) = C;
          alpha(j) = sum - C;
        } else if (alpha(j) > C) {
          alpha(j) = C;
          alpha(i) = sum - C;
        }
      }
      if (alpha(j) < 0.0) {
        alpha(j) = 0.0;
        alpha(i) = sum;
      } else if (alpha(i) < 0.0) {
        alpha(i) = 0.0;
        alpha(j) = sum;
      }
    }

    const double di = (alpha(i) - old_ai) * y(i);
    const double dj = (alpha(j) - old_aj) * y(j);
    grad += y.cwiseProduct(k_i * di + k_j * dj);
  }

  // Offset from the free support vectors, midpoint of the bounds otherwise.
  double rho;
  {
    double sum = 0.0;
    int free_count = 0;
    for (int t = 0; t < n; ++t) {
      if (alpha(t) > 0.0 && alpha(t) < C) {
        sum += y(t) * grad(t);
        ++free_count;
      }
    }
    rho = free_count > 0 ? sum / free_count : -(upper + lower) / 2.0;
  }

  SvmModel model;
  model.kernel = kernel;
  model.poly_order = order;
  model.gamma = gamma;
  model.bias = -rho;
  model.converged = converged;
  model.iterations = iter;

  int sv_count = 0;
  for (int t = 0; t < n; ++t)
    if (alpha(t) > 0.0) ++sv_count;
  model.support_vectors.resize(sv_count, train.dim());
  model.dual_coeffs.resize(sv_count);
  int w = 0;
  for (int t = 0; t < n; ++t) {
    if (alpha(t) > 0.0) {
      model.support_vectors.row(w) = train.samples.row(t);
      model.dual_coeffs(w) = alpha(t) * y(t);
      ++w;
    }
  }
  return model;
}

}  // namespace sparsewarn
