#include "sparsewarn/normalize.hpp"

#include <cmath>

#include "sparsewarn/errors.hpp"

namespace sparsewarn {

namespace {

Eigen::MatrixXd apply_impl(const Eigen::MatrixXd& X, const NormStats& stats,
                           std::vector<std::string>* warnings) {
  if (X.cols() != stats.mean.size())
    throw NumericError("normalize: column count does not match fitted statistics");
  Eigen::MatrixXd out = X.rowwise() - stats.mean.transpose();
  if (stats.mode == NormMode::kZscore) {
    out.array().rowwise() /= stats.scale.transpose().array();
  } else {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      const double norm = out.row(i).norm();
      if (norm > 0.0) {
        out.row(i) /= norm;
      } else if (warnings != nullptr) {
        warnings->push_back("unitnorm: row " + std::to_string(i) +
                            " equals the training mean, left as zero vector");
      }
    }
  }
  return out;
}

}  // namespace

std::pair<Eigen::MatrixXd, NormStats> normalize_fit(const Eigen::MatrixXd& X, NormMode mode) {
  if (X.rows() < 1) throw NumericError("normalize: empty matrix");
  NormStats stats;
  stats.mode = mode;
  stats.mean = X.colwise().mean();
  if (mode == NormMode::kZscore) {
    stats.scale.resize(X.cols());
    const Eigen::MatrixXd centered = X.rowwise() - stats.mean.transpose();
    const double denom = X.rows() > 1 ? static_cast<double>(X.rows() - 1) : 1.0;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const double var = centered.col(j).squaredNorm() / denom;
      const double sd = std::sqrt(var);
      if (sd > 0.0) {
        stats.scale(j) = sd;
      } else {
        stats.scale(j) = 1.0;
        stats.warnings.push_back("zscore: feature " + std::to_string(j) +
                                 " has zero variance, scale set to 1");
      }
    }
  } else {
    stats.scale = Eigen::VectorXd::Ones(X.cols());
  }
  Eigen::MatrixXd out = apply_impl(X, stats, &stats.warnings);
  return {std::move(out), std::move(stats)};
}

Eigen::MatrixXd normalize_apply(const Eigen::MatrixXd& X, const NormStats& stats) {
  return apply_impl(X, stats, nullptr);
}

}  // namespace sparsewarn
