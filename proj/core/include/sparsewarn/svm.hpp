#ifndef SPARSEWARN_SVM_HPP
#define SPARSEWARN_SVM_HPP

#include <Eigen/Core>
#include <string>

#include "sparsewarn/dataset.hpp"

namespace sparsewarn {

enum class SvmKernel { kLinear, kPolynomial, kRbf };

const char* svm_kernel_name(SvmKernel kernel);
SvmKernel svm_kernel_from_name(const std::string& name);

/// Soft-margin binary SVM solved in the dual by sequential minimal
/// optimization with maximal-violating-pair selection. Class 1 maps to +1,
/// class 0 to -1; decision f(x) = sum_i alpha_i y_i K(x_i, x) + bias.
struct SvmModel {
  SvmKernel kernel = SvmKernel::kLinear;
  int poly_order = 3;
  double gamma = 1.0;
  Eigen::MatrixXd support_vectors;   // rows
  Eigen::VectorXd dual_coeffs;       // alpha_i * y_i per support vector
  double bias = 0.0;
  bool converged = false;
  int iterations = 0;

  double decision(const Eigen::VectorXd& x) const;
  int predict(const Eigen::VectorXd& x) const { return decision(x) >= 0.0 ? 1 : 0; }
};

/// For RBF, `gamma_or_order` is the exponent rate of exp(-gamma ||x-x'||^2);
/// for polynomial it is the order of (1 + <x,x'>)^order; ignored for linear.
/// Terminates when the maximal KKT violation drops below 1e-3 or after the
/// iteration cap (1e5 pair updates), in which case the best-so-far duals are
/// returned flagged unconverged.
SvmModel svm_train(const FeatureDataset& train, SvmKernel kernel, double C,
                   double gamma_or_order);

}  // namespace sparsewarn

#endif
