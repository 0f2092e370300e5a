#ifndef SPARSEWARN_PCA_HPP
#define SPARSEWARN_PCA_HPP

#include <Eigen/Core>

#include "sparsewarn/dataset.hpp"

namespace sparsewarn {

/// Linear projection y = basis * (s - mean). Rows of `basis` are orthonormal
/// principal directions ordered by non-increasing explained variance.
struct Projector {
  Eigen::MatrixXd basis;            // m x d
  Eigen::VectorXd mean;             // d
  Eigen::VectorXd explained_var;    // m, non-increasing

  int out_dim() const { return static_cast<int>(basis.rows()); }
  int in_dim() const { return static_cast<int>(basis.cols()); }
};

/// Fits the top-m principal directions of the mean-centered training matrix
/// via thin SVD. Sign is fixed so each direction's largest-magnitude entry is
/// positive. Requires m <= min(N-1, d) and non-degenerate data.
Projector fit_pca(const FeatureDataset& train, int m);

Eigen::VectorXd project(const Projector& p, const Eigen::VectorXd& sample);

/// Projects each row of `rows` (N x d) to N x m.
Eigen::MatrixXd project_rows(const Projector& p, const Eigen::MatrixXd& rows);

}  // namespace sparsewarn

#endif
