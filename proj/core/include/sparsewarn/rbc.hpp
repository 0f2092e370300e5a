#ifndef SPARSEWARN_RBC_HPP
#define SPARSEWARN_RBC_HPP

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "sparsewarn/dictionary.hpp"
#include "sparsewarn/solvers.hpp"

namespace sparsewarn {

/// Residual-argmin decision over a class-grouped dictionary. `predicted` is
/// the argmin of `residuals` with ties broken toward the lower class index.
struct ClassDecision {
  int predicted = -1;
  std::vector<double> residuals;
  Eigen::VectorXd code;
};

using SparseSolver =
    std::function<SparseSolution(const Eigen::MatrixXd&, const Eigen::VectorXd&)>;

/// Four-step sparse-representation classification: the query is expected
/// unit-normalized, the solver recovers the code, per-class residuals use only
/// that class's columns and coefficients, prediction is the residual argmin.
ClassDecision src_classify(const Dictionary& dict, const Eigen::VectorXd& y,
                           const SparseSolver& solver);

/// Collaborative variant: the code is the precomputed ridge estimate, the
/// residual steps are identical to src_classify.
ClassDecision crc_classify(const Dictionary& dict, const RidgeDenoiser& denoiser,
                           const Eigen::VectorXd& y);

/// Log-spaced candidates 10^-13 .. 10^3 (17 points), the coarse grid of the
/// ridge parameter search.
std::vector<double> crc_lambda_grid();

/// Coarse pass over `grid` followed by a fine scan of lambda* +/- 5 steps of
/// lambda*/10. Accuracy is measured by crc_classify of the validation rows
/// against a dictionary built from the (already projected, unit-norm) training
/// rows; ties prefer the smaller lambda.
double tune_crc_lambda(const FeatureDataset& train, const FeatureDataset& validation,
                       const std::vector<double>& grid);

}  // namespace sparsewarn

#endif
