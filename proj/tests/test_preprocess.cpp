#include <doctest.h>

#include "sparsewarn/errors.hpp"
#include "sparsewarn/normalize.hpp"
#include "sparsewarn/pca.hpp"
#include "sparsewarn/rng.hpp"

using namespace sparsewarn;

namespace {

FeatureDataset random_ds(int n, int d, std::uint64_t seed) {
  FeatureDataset ds;
  ds.samples.resize(n, d);
  ds.labels.assign(static_cast<std::size_t>(n), 0);
  ds.class_names = {"only"};
  Rng rng(seed);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) ds.samples(i, j) = rng.next_normal();
  return ds;
}

}  // namespace

TEST_CASE("fit_pca: compression ratio bookkeeping at the paper's shape") {
  const FeatureDataset ds = random_ds(600, 1024, 1);
  const Projector p = fit_pca(ds, 512);
  CHECK(p.out_dim() == 512);
  CHECK(p.in_dim() == 1024);
  CHECK(static_cast<double>(p.out_dim()) / p.in_dim() == doctest::Approx(0.5));
}

TEST_CASE("fit_pca: rank-1 data on the line x2 = 2 x1") {
  FeatureDataset ds;
  ds.samples.resize(6, 2);
  for (int i = 0; i < 6; ++i) {
    const double t = i - 2.5;
    ds.samples(i, 0) = t;
    ds.samples(i, 1) = 2.0 * t;
  }
  ds.labels.assign(6, 0);
  ds.class_names = {"only"};
  const Projector p = fit_pca(ds, 1);
  const double s5 = std::sqrt(5.0);
  CHECK(p.basis(0, 0) == doctest::Approx(1.0 / s5).epsilon(1e-9));
  CHECK(p.basis(0, 1) == doctest::Approx(2.0 / s5).epsilon(1e-9));
  // all variance along the single direction
  CHECK(p.explained_var(0) > 0.0);

  SUBCASE("hand-computed projection of (1,2) with zero mean") {
    Projector q = p;
    q.mean.setZero();
    Eigen::VectorXd s(2);
    s << 1.0, 2.0;
    const Eigen::VectorXd y = project(q, s);
    CHECK(y(0) == doctest::Approx(s5).epsilon(1e-9));
  }
}

TEST_CASE("fit_pca: full-rank round-trip reconstruction oracle") {
  const FeatureDataset ds = random_ds(50, 8, 2);
  const Projector p = fit_pca(ds, 8);
  for (int i = 0; i < ds.num_samples(); ++i) {
    const Eigen::VectorXd s = ds.samples.row(i).transpose();
    const Eigen::VectorXd rebuilt = p.mean + p.basis.transpose() * project(p, s);
    CHECK((rebuilt - s).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("fit_pca: rows orthonormal, variances non-increasing, signs fixed") {
  const FeatureDataset ds = random_ds(40, 12, 3);
  const Projector p = fit_pca(ds, 6);
  const Eigen::MatrixXd gram = p.basis * p.basis.transpose();
  CHECK((gram - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-9);
  for (int i = 1; i < 6; ++i) CHECK(p.explained_var(i) <= p.explained_var(i - 1) + 1e-12);
  for (int i = 0; i < 6; ++i) {
    Eigen::Index arg = 0;
    p.basis.row(i).cwiseAbs().maxCoeff(&arg);
    CHECK(p.basis(i, arg) > 0.0);
  }
}

TEST_CASE("fit_pca: error cases") {
  const FeatureDataset ds = random_ds(10, 4, 4);
  CHECK_THROWS_AS(fit_pca(ds, 5), NumericError);   // m > d
  FeatureDataset tiny = random_ds(3, 8, 5);
  CHECK_THROWS_AS(fit_pca(tiny, 3), NumericError); // m > N-1
  FeatureDataset flat = random_ds(5, 3, 6);
  flat.samples.setConstant(2.0);
  CHECK_THROWS_AS(fit_pca(flat, 1), NumericError); // zero variance everywhere
}

TEST_CASE("project: centering and identity basis") {
  const FeatureDataset ds = random_ds(30, 5, 7);
  const Projector p = fit_pca(ds, 4);
  CHECK(project(p, p.mean).cwiseAbs().maxCoeff() < 1e-12);

  Projector ident;
  ident.basis = Eigen::MatrixXd::Identity(5, 5);
  ident.mean = Eigen::VectorXd::Zero(5);
  ident.explained_var = Eigen::VectorXd::Ones(5);
  const Eigen::VectorXd s = ds.samples.row(0).transpose();
  CHECK((project(ident, s) - s).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(project(p, Eigen::VectorXd::Zero(7)), NumericError);
}

TEST_CASE("projection is affine-linear after centering") {
  const FeatureDataset ds = random_ds(25, 6, 8);
  const Projector p = fit_pca(ds, 3);
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd s1(6), s2(6);
    for (int j = 0; j < 6; ++j) {
      s1(j) = rng.next_normal();
      s2(j) = rng.next_normal();
    }
    const double a = rng.next_uniform(-2.0, 2.0);
    const double b = rng.next_uniform(-2.0, 2.0);
    const Eigen::VectorXd combo = a * s1 + b * s2 + (1.0 - a - b) * p.mean;
    const Eigen::VectorXd lhs = project(p, combo);
    const Eigen::VectorXd rhs = a * project(p, s1) + b * project(p, s2);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("normalize zscore: fit example and idempotence") {
  Eigen::MatrixXd X(2, 1);
  X << 1.0, 3.0;
  auto [out, stats] = normalize_fit(X, NormMode::kZscore);
  CHECK(stats.mean(0) == doctest::Approx(2.0));
  CHECK(stats.scale(0) == doctest::Approx(std::sqrt(2.0)));  // sample std over 2 points
  CHECK(out(0, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(out(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));

  // Re-applying the same stats to already-normalized data with refit stats is
  // the identity when the stats describe that data.
  auto [out2, stats2] = normalize_fit(out, NormMode::kZscore);
  const Eigen::MatrixXd out3 = normalize_apply(out2, stats2);
  CHECK((out3 - out2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("normalize zscore: held-out row matches the brute-force recompute") {
  const FeatureDataset ds = random_ds(20, 4, 10);
  auto [train_out, stats] = normalize_fit(ds.samples, NormMode::kZscore);
  Eigen::MatrixXd held(1, 4);
  held << 0.3, -1.2, 5.0, 0.01;
  const Eigen::MatrixXd applied = normalize_apply(held, stats);
  for (int j = 0; j < 4; ++j) {
    const double expected = (held(0, j) - stats.mean(j)) / stats.scale(j);
    CHECK(applied(0, j) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("normalize zscore: zero-variance feature gets scale 1 plus a warning") {
  Eigen::MatrixXd X(3, 2);
  X << 1, 7, 2, 7, 3, 7;
  auto [out, stats] = normalize_fit(X, NormMode::kZscore);
  CHECK(stats.scale(1) == 1.0);
  REQUIRE(stats.warnings.size() == 1);
  CHECK(out.col(1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("normalize unitnorm: rows have unit norm, zero row stays zero") {
  const FeatureDataset ds = random_ds(15, 6, 11);
  auto [out, stats] = normalize_fit(ds.samples, NormMode::kUnitNorm);
  for (int i = 0; i < 15; ++i) CHECK(out.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));

  // a row equal to the training mean centers to zero and is left alone
  Eigen::MatrixXd at_mean(1, 6);
  at_mean = stats.mean.transpose();
  const Eigen::MatrixXd applied = normalize_apply(at_mean, stats);
  CHECK(applied.cwiseAbs().maxCoeff() == 0.0);
}
