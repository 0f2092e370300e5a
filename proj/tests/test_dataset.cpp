#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "sparsewarn/dataset.hpp"
#include "sparsewarn/errors.hpp"
#include "sparsewarn/folds.hpp"
#include "sparsewarn/rng.hpp"

using namespace sparsewarn;

namespace {

std::string temp_path(const char* name) {
  return std::string("/tmp/sparsewarn_test_") + name;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

FeatureDataset two_class_counts(int n0, int n1, int d, std::uint64_t seed) {
  FeatureDataset ds;
  ds.samples.resize(n0 + n1, d);
  ds.labels.resize(static_cast<std::size_t>(n0 + n1));
  ds.class_names = {"class0", "class1"};
  Rng rng(seed);
  for (int i = 0; i < n0 + n1; ++i) {
    for (int j = 0; j < d; ++j) ds.samples(i, j) = rng.next_normal();
    ds.labels[static_cast<std::size_t>(i)] = i < n0 ? 0 : 1;
  }
  return ds;
}

}  // namespace

TEST_CASE("csv load: minimal two-sample file") {
  const std::string path = temp_path("min.csv");
  write_text(path,
             "# fvec v1 n=2 d=3 c=2\n"
             "0,1.5,2.5,3.5\n"
             "1,-1,0,2\n");
  const FeatureDataset ds = load_features(path, FileFormat::kCsv);
  CHECK(ds.num_samples() == 2);
  CHECK(ds.dim() == 3);
  CHECK(ds.num_classes() == 2);
  CHECK(ds.samples(0, 1) == doctest::Approx(2.5));
  CHECK(ds.labels[1] == 1);
}

TEST_CASE("csv load: Early-QaTa-shaped file row counts") {
  // 1065 label-1 and 12544 label-0 rows at d=2 to keep the file small.
  const std::string path = temp_path("qata_shape.csv");
  std::ofstream out(path);
  out << "# fvec v1 n=13609 d=2 c=2\n";
  for (int i = 0; i < 12544; ++i) out << "0,0.5,1.25\n";
  for (int i = 0; i < 1065; ++i) out << "1,1.5,-0.25\n";
  out.close();
  const FeatureDataset ds = load_features(path, FileFormat::kCsv);
  CHECK(ds.num_samples() == 13609);
  const auto counts = ds.class_counts();
  CHECK(counts[0] == 12544);
  CHECK(counts[1] == 1065);
}

TEST_CASE("binary round-trip is bit-exact") {
  // Values drawn as f32 so the on-disk f32 records reproduce them exactly.
  FeatureDataset ds;
  ds.samples.resize(10, 16);
  ds.labels.resize(10);
  ds.class_names = {"a", "b", "c"};
  Rng rng(99);
  for (int i = 0; i < 10; ++i) {
    ds.labels[static_cast<std::size_t>(i)] = i % 3;
    for (int j = 0; j < 16; ++j)
      ds.samples(i, j) = static_cast<double>(static_cast<float>(rng.next_normal()));
  }
  const std::string path = temp_path("roundtrip.fvec");
  save_features(ds, path, FileFormat::kBinary);
  const FeatureDataset back = load_features(path, FileFormat::kBinary);
  REQUIRE(back.num_samples() == 10);
  REQUIRE(back.dim() == 16);
  CHECK(back.labels == ds.labels);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 16; ++j) CHECK(back.samples(i, j) == ds.samples(i, j));
}

TEST_CASE("csv parse errors are distinct and name the line") {
  const std::string path = temp_path("bad.csv");

  SUBCASE("malformed header") {
    write_text(path, "# fvec v2 n=1 d=1 c=1\n0,1\n");
    CHECK_THROWS_WITH_AS(load_features(path, FileFormat::kCsv),
                         doctest::Contains("line 1"), DataError);
  }
  SUBCASE("row length mismatch") {
    write_text(path, "# fvec v1 n=1 d=3 c=1\n0,1,2\n");
    CHECK_THROWS_WITH_AS(load_features(path, FileFormat::kCsv),
                         doctest::Contains("row length"), DataError);
  }
  SUBCASE("non-finite value") {
    write_text(path, "# fvec v1 n=1 d=2 c=1\n0,1,inf\n");
    CHECK_THROWS_AS(load_features(path, FileFormat::kCsv), DataError);
  }
  SUBCASE("unknown label") {
    write_text(path, "# fvec v1 n=1 d=2 c=2\n5,1,2\n");
    CHECK_THROWS_WITH_AS(load_features(path, FileFormat::kCsv),
                         doctest::Contains("unknown label"), DataError);
  }
}

TEST_CASE("binary errors name the byte offset") {
  const std::string path = temp_path("bad.fvec");
  std::ofstream out(path, std::ios::binary);
  out << "FVEC2";
  out.close();
  CHECK_THROWS_WITH_AS(load_features(path, FileFormat::kBinary),
                       doctest::Contains("byte offset 0"), DataError);
}

TEST_CASE("stratified folds: Table-shaped test split sizes") {
  SUBCASE("full dataset shape") {
    const FeatureDataset ds = two_class_counts(1065, 12544, 2, 1);
    const FoldPlan plan = stratified_kfold(ds, 5, 7);
    for (int f = 0; f < 5; ++f) {
      int pos = 0, neg = 0;
      for (int idx : plan.test_indices(f))
        (ds.labels[static_cast<std::size_t>(idx)] == 0 ? pos : neg)++;
      CHECK(pos == 213);  // 1065 divides evenly
      CHECK((neg == 2508 || neg == 2509));
    }
  }
  SUBCASE("initial-version shape") {
    const FeatureDataset ds = two_class_counts(175, 1579, 2, 2);
    const FoldPlan plan = stratified_kfold(ds, 5, 7);
    for (int f = 0; f < 5; ++f) {
      int pos = 0, neg = 0;
      for (int idx : plan.test_indices(f))
        (ds.labels[static_cast<std::size_t>(idx)] == 0 ? pos : neg)++;
      CHECK(pos == 35);
      CHECK((neg == 315 || neg == 316));
    }
  }
  SUBCASE("single class exact division") {
    FeatureDataset ds = two_class_counts(10, 0, 2, 3);
    ds.class_names = {"only"};
    const FoldPlan plan = stratified_kfold(ds, 5, 7);
    for (int f = 0; f < 5; ++f) CHECK(plan.test_indices(f).size() == 2);
  }
}

TEST_CASE("stratified folds: remainder goes to the lowest-numbered folds") {
  const FeatureDataset ds = two_class_counts(7, 11, 2, 4);
  const FoldPlan plan = stratified_kfold(ds, 5, 1);
  std::vector<int> pos_counts(5, 0);
  for (int i = 0; i < ds.num_samples(); ++i)
    if (ds.labels[static_cast<std::size_t>(i)] == 0)
      ++pos_counts[static_cast<std::size_t>(plan.assignments[static_cast<std::size_t>(i)])];
  CHECK(pos_counts == std::vector<int>{2, 2, 1, 1, 1});
}

TEST_CASE("stratified folds: deterministic, disjoint, value-invariant") {
  FeatureDataset ds = two_class_counts(23, 31, 3, 5);
  const FoldPlan a = stratified_kfold(ds, 4, 99);
  ds.samples.array() += 17.0;  // values must not matter
  const FoldPlan b = stratified_kfold(ds, 4, 99);
  CHECK(a.assignments == b.assignments);

  std::set<int> seen;
  for (int f = 0; f < 4; ++f)
    for (int idx : a.test_indices(f)) CHECK(seen.insert(idx).second);
  CHECK(static_cast<int>(seen.size()) == ds.num_samples());

  const FoldPlan c = stratified_kfold(ds, 4, 100);
  CHECK(a.assignments != c.assignments);
}

TEST_CASE("stratified folds: class smaller than k fails") {
  const FeatureDataset ds = two_class_counts(3, 40, 2, 6);
  CHECK_THROWS_AS(stratified_kfold(ds, 5, 1), DataError);
}

TEST_CASE("balance_oversample: paper count arithmetic") {
  SUBCASE("full dataset") {
    const FeatureDataset train = two_class_counts(852, 10035, 2, 7);
    const FeatureDataset out = balance_oversample(train, 10035, 0.0, 3);
    CHECK(out.num_samples() == 20070);
    const auto counts = out.class_counts();
    CHECK(counts[0] == 10035);
    CHECK(counts[1] == 10035);
  }
  SUBCASE("initial version") {
    const FeatureDataset train = two_class_counts(140, 1263, 2, 8);
    const FeatureDataset out = balance_oversample(train, 1263, 0.0, 3);
    CHECK(out.num_samples() == 2526);
  }
}

TEST_CASE("balance_oversample: already balanced input is returned unchanged") {
  const FeatureDataset train = two_class_counts(5, 5, 4, 9);
  const FeatureDataset out = balance_oversample(train, 5, 2.5, 11);
  REQUIRE(out.num_samples() == 10);
  CHECK(out.samples == train.samples);
  CHECK(out.labels == train.labels);
}

TEST_CASE("balance_oversample: zero jitter adds only exact copies") {
  const FeatureDataset train = two_class_counts(4, 9, 5, 10);
  const FeatureDataset out = balance_oversample(train, 9, 0.0, 12);
  REQUIRE(out.num_samples() == 18);
  // originals first, unmodified
  CHECK(out.samples.topRows(13) == train.samples);
  // every added row equals some original row of its class
  for (int i = 13; i < 18; ++i) {
    bool found = false;
    for (int j = 0; j < 13 && !found; ++j) {
      if (train.labels[static_cast<std::size_t>(j)] != out.labels[static_cast<std::size_t>(i)])
        continue;
      found = (train.samples.row(j).array() == out.samples.row(i).array()).all();
    }
    CHECK(found);
  }
}

TEST_CASE("balance_oversample: target below majority fails") {
  const FeatureDataset train = two_class_counts(4, 9, 5, 10);
  CHECK_THROWS_AS(balance_oversample(train, 8, 0.0, 1), DataError);
}

TEST_CASE("balance_oversample: per-feature jitter scales are honored") {
  const FeatureDataset train = two_class_counts(4, 50, 3, 13);
  Eigen::VectorXd sig(3);
  sig << 0.0, 1.0, 0.0;
  const FeatureDataset out = balance_oversample(train, 50, sig, 5);
  // jitter only in feature 1: features 0 and 2 of added rows match an original
  for (int i = train.num_samples(); i < out.num_samples(); ++i) {
    if (out.labels[static_cast<std::size_t>(i)] != 0) continue;
    bool match02 = false;
    for (int j = 0; j < 4 && !match02; ++j)
      match02 = out.samples(i, 0) == train.samples(j, 0) &&
                out.samples(i, 2) == train.samples(j, 2);
    CHECK(match02);
  }
}
