#include "sparsewarn/pca.hpp"

#include <Eigen/SVD>

#include "sparsewarn/errors.hpp"

namespace sparsewarn {

Projector fit_pca(const FeatureDataset& train, int m) {
  const Eigen::Index n = train.samples.rows();
  const Eigen::Index d = train.samples.cols();
  if (n < 2) throw NumericError("fit_pca: need at least 2 training samples");
  if (m < 1 || m > std::min<Eigen::Index>(n - 1, d))
    throw NumericError("fit_pca: m=" + std::to_string(m) + " exceeds min(N-1, d)=" +
                       std::to_string(std::min<Eigen::Index>(n - 1, d)));

  Projector p;
  p.mean = train.samples.colwise().mean();
  Eigen::MatrixXd centered = train.samples.rowwise() - p.mean.transpose();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(0) <= 0.0)
    throw NumericError("fit_pca: degenerate training data, zero variance in all directions");

  p.basis = svd.matrixV().leftCols(m).transpose();
  p.explained_var.resize(m);
  for (int i = 0; i < m; ++i)
    p.explained_var(i) = sv(i) * sv(i) / static_cast<double>(n - 1);

  // Fix each direction's sign: largest-magnitude entry positive.
  for (int i = 0; i < m; ++i) {
    Eigen::Index argmax = 0;
    p.basis.row(i).cwiseAbs().maxCoeff(&argmax);
    if (p.basis(i, argmax) < 0.0) p.basis.row(i) = -p.basis.row(i);
  }
  return p;
}

Eigen::VectorXd project(const Projector& p, const Eigen::VectorXd& sample) {
  if (sample.size() != p.in_dim())
    throw NumericError("project: sample dimension " + std::to_string(sample.size()) +
                       " does not match projector input dimension " + std::to_string(p.in_dim()));
  return p.basis * (sample - p.mean);
}

Eigen::MatrixXd project_rows(const Projector& p, const Eigen::MatrixXd& rows) {
  if (rows.cols() != p.in_dim())
    throw NumericError("project_rows: row dimension does not match projector input dimension");
  return (rows.rowwise() - p.mean.transpose()) * p.basis.transpose();
}

}  // namespace sparsewarn
