#ifndef SPARSEWARN_DICTIONARY_HPP
#define SPARSEWARN_DICTIONARY_HPP

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "sparsewarn/dataset.hpp"

namespace sparsewarn {

/// Class-grouped dictionary: columns are unit-l2 atoms, classes occupy
/// contiguous ascending column ranges.
struct Dictionary {
  Eigen::MatrixXd atoms;                             // m x n
  std::vector<std::pair<int, int>> class_ranges;     // half-open [begin, end) per class

  int measurement_dim() const { return static_cast<int>(atoms.rows()); }
  int num_atoms() const { return static_cast<int>(atoms.cols()); }
  int num_classes() const { return static_cast<int>(class_ranges.size()); }
  int class_of_atom(int column) const;
};

/// Precomputed ridge operator mapping measurements to coarse codes:
/// op = (AᵀA + lambda I)⁻¹Aᵀ for the dictionary's atom matrix A. The residual
/// of the defining normal equations is verified to 1e-8 on construction.
struct RidgeDenoiser {
  Eigen::MatrixXd op;   // n x m
  double lambda = 0.0;
};

/// Fixed bijection between dictionary columns and cells of a 2-D plane with
/// contiguous rectangular same-class blocks. Blocks sit side by side: class c
/// owns columns [c*block_cols, (c+1)*block_cols) over all rows, filled
/// column-major within the block.
struct PlaneLayout {
  int height = 0;
  int width = 0;
  int block_rows = 0;
  int block_cols = 0;
  int num_classes = 0;
  std::vector<int> atom_to_cell;   // atom index -> row-major cell index
  std::vector<int> cell_to_atom;   // inverse

  int num_cells() const { return height * width; }
};

inline constexpr int kAllAtoms = -1;

/// Row indices that become atoms, per class in final atom order: the first
/// per_class indices of a per-class shuffle seeded by (seed, class), or every
/// class row in input order for kAllAtoms.
std::vector<std::vector<int>> dictionary_selection(const FeatureDataset& projected_train,
                                                   int per_class, std::uint64_t seed);

/// Selects per_class atoms per class (kAllAtoms for every sample), columns
/// re-normalized to unit l2 and grouped contiguously by ascending class.
Dictionary build_dictionary(const FeatureDataset& projected_train, int per_class,
                            std::uint64_t seed);

RidgeDenoiser build_denoiser(const Dictionary& dict, double lambda);

enum class ProxyKind { kTranspose, kRidge };

/// Coarse code estimate: atomsᵀ·y (transpose kind, dictionary route) or
/// denoiser.op·y (ridge kind).
Eigen::VectorXd proxy(const Dictionary& dict, const Eigen::VectorXd& y);
Eigen::VectorXd proxy(const RidgeDenoiser& den, const Eigen::VectorXd& y);

/// Builds the plane for a dictionary with equal per-class atom counts. The
/// block height is the largest divisor of n/C that does not exceed
/// sqrt(n/C); 1250 atoms in 2 classes give 25x25 blocks on a 25x50 plane.
PlaneLayout make_plane_layout(const Dictionary& dict);

Eigen::MatrixXd reshape_to_plane(const Eigen::VectorXd& code, const PlaneLayout& layout);
Eigen::VectorXd flatten_from_plane(const Eigen::MatrixXd& plane, const PlaneLayout& layout);

}  // namespace sparsewarn

#endif
