#ifndef SPARSEWARN_DATASET_HPP
#define SPARSEWARN_DATASET_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

namespace sparsewarn {

/// Labeled feature vectors. Rows of `samples` are the feature vectors;
/// `labels[i]` is the class index of row i, in [0, num_classes()).
struct FeatureDataset {
  Eigen::MatrixXd samples;          // N x d
  std::vector<int> labels;          // size N
  std::vector<std::string> class_names;

  int num_samples() const { return static_cast<int>(samples.rows()); }
  int dim() const { return static_cast<int>(samples.cols()); }
  int num_classes() const { return static_cast<int>(class_names.size()); }

  std::vector<int> class_counts() const;

  /// Row-subset copy preserving order of `indices`.
  FeatureDataset subset(const std::vector<int>& indices) const;

  /// Checks labels in range, N > 0, finite values; throws DataError.
  void validate() const;
};

enum class FileFormat { kCsv, kBinary };

/// Reads the on-disk feature-vector container.
///
/// CSV: header `# fvec v1 n=<N> d=<D> c=<C>`, then N lines `label,f1,...,fD`.
/// Binary: magic "FVEC1", little-endian u32 N, D, C, then N records of
/// (u32 label, D little-endian f32 values).
///
/// Malformed header, row-length mismatch, non-finite value and unknown label
/// are distinct DataErrors naming the offending line (CSV) or byte offset
/// (binary).
FeatureDataset load_features(const std::string& path, FileFormat format);

void save_features(const FeatureDataset& ds, const std::string& path,
                   FileFormat format);

}  // namespace sparsewarn

#endif
