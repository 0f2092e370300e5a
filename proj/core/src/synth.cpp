#include "sparsewarn/synth.hpp"

#include <Eigen/Core>
#include <cmath>

#include "sparsewarn/errors.hpp"
#include "sparsewarn/rng.hpp"

namespace sparsewarn {

FeatureDataset synth_dataset(const SynthParams& params) {
  if (params.classes < 2) throw ConfigError("synth: need at least 2 classes");
  if (params.dim < params.classes)
    throw ConfigError("synth: dimension must be at least the class count");
  if (params.separation < 0.0 || params.sigma <= 0.0)
    throw ConfigError("synth: separation must be >= 0 and sigma > 0");
  std::vector<long long> counts = params.per_class;
  if (counts.empty()) throw ConfigError("synth: per-class counts missing");
  if (counts.size() == 1) counts.assign(static_cast<std::size_t>(params.classes), counts[0]);
  if (counts.size() != static_cast<std::size_t>(params.classes))
    throw ConfigError("synth: per-class counts must match the class count");
  long long total = 0;
  for (long long c : counts) {
    if (c < 1) throw ConfigError("synth: per-class count must be positive");
    total += c;
  }

  Rng mean_rng(mix_seed(params.seed, 0x5f9dULL));

  // Class means on mutually orthogonal directions, plus a private orthonormal
  // subspace per class. The subspace gives each class covariance structure of
  // its own, which mean-invariant, sign-invariant classifiers (the
  // representation-residual family) can use; it is orthogonal to every mean
  // direction so the mean-axis margin is untouched.
  const int subspace_rank =
      std::max(0, std::min(6, (params.dim - params.classes) / params.classes));
  const int total_dirs = params.classes * (1 + subspace_rank);
  Eigen::MatrixXd directions(total_dirs, params.dim);
  for (int c = 0; c < total_dirs; ++c) {
    Eigen::VectorXd v(params.dim);
    for (int j = 0; j < params.dim; ++j) v(j) = mean_rng.next_normal();
    for (int prev = 0; prev < c; ++prev)
      v -= directions.row(prev).dot(v) * directions.row(prev).transpose();
    const double norm = v.norm();
    if (norm < 1e-12) throw NumericError("synth: degenerate direction draw");
    directions.row(c) = v.transpose() / norm;
  }
  // Orthogonal means of norm sqrt(2)*sep*sigma are pairwise 2*sep*sigma apart.
  const double radius = std::sqrt(2.0) * params.separation * params.sigma;
  const double subspace_scale = 3.0 * params.sigma;

  FeatureDataset ds;
  ds.samples.resize(total, params.dim);
  ds.labels.resize(static_cast<std::size_t>(total));
  ds.class_names.resize(static_cast<std::size_t>(params.classes));
  for (int c = 0; c < params.classes; ++c)
    ds.class_names[static_cast<std::size_t>(c)] = "class" + std::to_string(c);

  Eigen::Index row = 0;
  for (int c = 0; c < params.classes; ++c) {
    Rng rng(mix_seed(params.seed, 0xda7aULL + static_cast<std::uint64_t>(c)));
    const Eigen::VectorXd mean = radius * directions.row(c).transpose();
    for (long long i = 0; i < counts[static_cast<std::size_t>(c)]; ++i) {
      Eigen::VectorXd sample = mean;
      for (int r = 0; r < subspace_rank; ++r) {
        const int dir = params.classes + c * subspace_rank + r;
        sample += subspace_scale * rng.next_normal() * directions.row(dir).transpose();
      }
      for (int j = 0; j < params.dim; ++j)
        ds.samples(row, j) = sample(j) + params.sigma * rng.next_normal();
      ds.labels[static_cast<std::size_t>(row)] = c;
      ++row;
    }
  }
  return ds;
}

}  // namespace sparsewarn
