#ifndef SPARSEWARN_NORMALIZE_HPP
#define SPARSEWARN_NORMALIZE_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

namespace sparsewarn {

enum class NormMode { kZscore, kUnitNorm };

/// Training-split statistics for either normalization scheme. In zscore mode
/// both mean and scale apply per feature; in unitnorm mode only the mean is
/// used and each row is rescaled to unit l2 norm afterwards.
struct NormStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
  NormMode mode = NormMode::kZscore;
  std::vector<std::string> warnings;
};

/// Fits stats on X (rows are samples) and returns the normalized copy.
/// Zero-variance features get scale 1 with a recorded warning; zero rows in
/// unitnorm mode stay zero with a recorded warning.
std::pair<Eigen::MatrixXd, NormStats> normalize_fit(const Eigen::MatrixXd& X, NormMode mode);

/// Applies previously fitted stats. Appends any zero-row warnings to a copy of
/// the input stats' warning list on the returned matrix only (stats stay
/// immutable).
Eigen::MatrixXd normalize_apply(const Eigen::MatrixXd& X, const NormStats& stats);

}  // namespace sparsewarn

#endif
