#include "sparsewarn/dictionary.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "sparsewarn/errors.hpp"
#include "sparsewarn/rng.hpp"

namespace sparsewarn {

int Dictionary::class_of_atom(int column) const {
  for (std::size_t c = 0; c < class_ranges.size(); ++c)
    if (column >= class_ranges[c].first && column < class_ranges[c].second)
      return static_cast<int>(c);
  throw NumericError("dictionary: atom index " + std::to_string(column) + " out of range");
}

std::vector<std::vector<int>> dictionary_selection(const FeatureDataset& projected_train,
                                                   int per_class, std::uint64_t seed) {
  const int c = projected_train.num_classes();
  const auto counts = projected_train.class_counts();

  std::vector<std::vector<int>> by_class(static_cast<std::size_t>(c));
  for (int i = 0; i < projected_train.num_samples(); ++i)
    by_class[static_cast<std::size_t>(projected_train.labels[static_cast<std::size_t>(i)])]
        .push_back(i);

  std::vector<std::vector<int>> chosen(static_cast<std::size_t>(c));
  for (int cls = 0; cls < c; ++cls) {
    auto& idx = by_class[static_cast<std::size_t>(cls)];
    if (per_class == kAllAtoms) {
      chosen[static_cast<std::size_t>(cls)] = idx;
    } else {
      if (per_class > counts[static_cast<std::size_t>(cls)])
        throw DataError("build_dictionary: class " + std::to_string(cls) + " has only " +
                        std::to_string(counts[static_cast<std::size_t>(cls)]) +
                        " samples, cannot select " + std::to_string(per_class));
      Rng rng(mix_seed(seed, 0xd1c7ULL + static_cast<std::uint64_t>(cls)));
      rng.shuffle(idx);
      chosen[static_cast<std::size_t>(cls)].assign(idx.begin(), idx.begin() + per_class);
    }
  }
  return chosen;
}

Dictionary build_dictionary(const FeatureDataset& projected_train, int per_class,
                            std::uint64_t seed) {
  const int c = projected_train.num_classes();
  const auto chosen = dictionary_selection(projected_train, per_class, seed);
  int total = 0;
  for (const auto& rows : chosen) total += static_cast<int>(rows.size());

  Dictionary dict;
  dict.atoms.resize(projected_train.dim(), total);
  dict.class_ranges.resize(static_cast<std::size_t>(c));
  int col = 0;
  for (int cls = 0; cls < c; ++cls) {
    const int begin = col;
    for (int row : chosen[static_cast<std::size_t>(cls)]) {
      Eigen::VectorXd atom = projected_train.samples.row(row).transpose();
      const double norm = atom.norm();
      if (norm <= 0.0)
        throw NumericError("build_dictionary: zero-norm training vector at row " +
                           std::to_string(row));
      dict.atoms.col(col++) = atom / norm;
    }
    dict.class_ranges[static_cast<std::size_t>(cls)] = {begin, col};
  }
  return dict;
}

RidgeDenoiser build_denoiser(const Dictionary& dict, double lambda) {
  if (lambda <= 0.0) throw NumericError("build_denoiser: lambda must be positive");
  const Eigen::MatrixXd& A = dict.atoms;
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();

  RidgeDenoiser den;
  den.lambda = lambda;
  if (n <= m) {
    Eigen::MatrixXd gram = A.transpose() * A;
    gram.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
      throw NumericError("build_denoiser: factorization of the regularized Gram matrix failed");
    den.op = llt.solve(A.transpose());
  } else {
    // Push-through identity keeps the factorization at m x m when n > m:
    // (AᵀA + lI)⁻¹Aᵀ = Aᵀ(AAᵀ + lI)⁻¹.
    Eigen::MatrixXd outer = A * A.transpose();
    outer.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(outer);
    if (llt.info() != Eigen::Success)
      throw NumericError("build_denoiser: factorization of the regularized outer product failed");
    den.op = (llt.solve(A)).transpose();
  }
  if (!den.op.allFinite())
    throw NumericError("build_denoiser: non-finite entries in the ridge operator");

  // Construction check: ||(AᵀA + lI)B - Aᵀ||_inf < 1e-8, evaluated as
  // Aᵀ(AB) + lB - Aᵀ to avoid forming the n x n Gram matrix.
  const Eigen::MatrixXd inner = A * den.op;  // m x m
  const double residual =
      (A.transpose() * inner + lambda * den.op - A.transpose()).cwiseAbs().maxCoeff();
  if (residual >= 1e-8)
    throw NumericError("build_denoiser: normal-equation residual " + std::to_string(residual) +
                       " exceeds 1e-8");
  return den;
}

Eigen::VectorXd proxy(const Dictionary& dict, const Eigen::VectorXd& y) {
  if (y.size() != dict.measurement_dim())
    throw NumericError("proxy: measurement dimension mismatch");
  if (!y.allFinite()) throw NumericError("proxy: non-finite measurement");
  return dict.atoms.transpose() * y;
}

Eigen::VectorXd proxy(const RidgeDenoiser& den, const Eigen::VectorXd& y) {
  if (y.size() != den.op.cols())
    throw NumericError("proxy: measurement dimension mismatch");
  if (!y.allFinite()) throw NumericError("proxy: non-finite measurement");
  return den.op * y;
}

PlaneLayout make_plane_layout(const Dictionary& dict) {
  const int c = dict.num_classes();
  const int n = dict.num_atoms();
  if (c < 1 || n < 1) throw NumericError("make_plane_layout: empty dictionary");
  const int per_class = n / c;
  if (per_class * c != n)
    throw NumericError("make_plane_layout: atom count not divisible by class count");
  for (const auto& [begin, end] : dict.class_ranges) {
    if (end - begin != per_class)
      throw NumericError("make_plane_layout: plane requires equal per-class atom counts");
  }

  int block_rows = 1;
  const int limit = static_cast<int>(std::sqrt(static_cast<double>(per_class)));
  for (int h = 1; h <= limit; ++h)
    if (per_class % h == 0) block_rows = h;

  PlaneLayout layout;
  layout.num_classes = c;
  layout.block_rows = block_rows;
  layout.block_cols = per_class / block_rows;
  layout.height = block_rows;
  layout.width = layout.block_cols * c;
  layout.atom_to_cell.resize(static_cast<std::size_t>(n));
  layout.cell_to_atom.assign(static_cast<std::size_t>(n), -1);

  for (int cls = 0; cls < c; ++cls) {
    const int base_col = cls * layout.block_cols;
    const int atom_base = dict.class_ranges[static_cast<std::size_t>(cls)].first;
    for (int j = 0; j < per_class; ++j) {
      const int r = j % block_rows;              // column-major fill of the block
      const int col = base_col + j / block_rows;
      const int cell = r * layout.width + col;
      layout.atom_to_cell[static_cast<std::size_t>(atom_base + j)] = cell;
      layout.cell_to_atom[static_cast<std::size_t>(cell)] = atom_base + j;
    }
  }
  return layout;
}

Eigen::MatrixXd reshape_to_plane(const Eigen::VectorXd& code, const PlaneLayout& layout) {
  if (code.size() != layout.num_cells())
    throw NumericError("reshape_to_plane: code length " + std::to_string(code.size()) +
                       " does not match plane size " + std::to_string(layout.num_cells()));
  Eigen::MatrixXd plane(layout.height, layout.width);
  for (int atom = 0; atom < layout.num_cells(); ++atom) {
    const int cell = layout.atom_to_cell[static_cast<std::size_t>(atom)];
    plane(cell / layout.width, cell % layout.width) = code(atom);
  }
  return plane;
}

Eigen::VectorXd flatten_from_plane(const Eigen::MatrixXd& plane, const PlaneLayout& layout) {
  if (plane.rows() != layout.height || plane.cols() != layout.width)
    throw NumericError("flatten_from_plane: plane dimensions do not match layout");
  Eigen::VectorXd code(layout.num_cells());
  for (int atom = 0; atom < layout.num_cells(); ++atom) {
    const int cell = layout.atom_to_cell[static_cast<std::size_t>(atom)];
    code(atom) = plane(cell / layout.width, cell % layout.width);
  }
  return code;
}

}  // namespace sparsewarn
