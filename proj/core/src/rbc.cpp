#include "sparsewarn/rbc.hpp"

#include <cmath>

#include "sparsewarn/errors.hpp"

namespace sparsewarn {

namespace {

ClassDecision decide_from_code(const Dictionary& dict, const Eigen::VectorXd& y,
                               Eigen::VectorXd code) {
  ClassDecision decision;
  decision.residuals.resize(static_cast<std::size_t>(dict.num_classes()));
  for (int cls = 0; cls < dict.num_classes(); ++cls) {
    const auto [begin, end] = dict.class_ranges[static_cast<std::size_t>(cls)];
    const Eigen::VectorXd approx =
        dict.atoms.middleCols(begin, end - begin) * code.segment(begin, end - begin);
    decision.residuals[static_cast<std::size_t>(cls)] = (y - approx).norm();
  }
  decision.predicted = 0;
  for (int cls = 1; cls < dict.num_classes(); ++cls)
    if (decision.residuals[static_cast<std::size_t>(cls)] <
        decision.residuals[static_cast<std::size_t>(decision.predicted)])
      decision.predicted = cls;
  decision.code = std::move(code);
  return decision;
}

}  // namespace

ClassDecision src_classify(const Dictionary& dict, const Eigen::VectorXd& y,
                           const SparseSolver& solver) {
  if (y.size() != dict.measurement_dim())
    throw NumericError("src_classify: query dimension mismatch");
  SparseSolution sol;
  try {
    sol = solver(dict.atoms, y);
  } catch (const NumericError& e) {
    throw NumericError(std::string("src_classify: solver failed: ") + e.what());
  }
  return decide_from_code(dict, y, std::move(sol.coefficients));
}

ClassDecision crc_classify(const Dictionary& dict, const RidgeDenoiser& denoiser,
                           const Eigen::VectorXd& y) {
  if (y.size() != dict.measurement_dim())
    throw NumericError("crc_classify: query dimension mismatch");
  if (denoiser.op.rows() != dict.num_atoms() || denoiser.op.cols() != dict.measurement_dim())
    throw NumericError("crc_classify: denoiser shape does not match dictionary");
  return decide_from_code(dict, y, denoiser.op * y);
}

std::vector<double> crc_lambda_grid() {
  std::vector<double> grid;
  for (int e = -13; e <= 3; ++e) grid.push_back(std::pow(10.0, e));
  return grid;
}

namespace {

double validation_accuracy(const Dictionary& dict, const RidgeDenoiser& den,
                           const FeatureDataset& validation) {
  int correct = 0;
  for (int i = 0; i < validation.num_samples(); ++i) {
    const ClassDecision d = crc_classify(dict, den, validation.samples.row(i).transpose());
    if (d.predicted == validation.labels[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / validation.num_samples();
}

}  // namespace

double tune_crc_lambda(const FeatureDataset& train, const FeatureDataset& validation,
                       const std::vector<double>& grid) {
  if (validation.num_samples() == 0) throw DataError("tune_crc_lambda: empty validation split");
  if (grid.empty()) throw ConfigError("tune_crc_lambda: empty lambda grid");

  const Dictionary dict = build_dictionary(train, kAllAtoms, 0);

  auto best_of = [&](const std::vector<double>& candidates) {
    double best_lambda = candidates.front();
    double best_acc = -1.0;
    for (double lambda : candidates) {
      const RidgeDenoiser den = build_denoiser(dict, lambda);
      const double acc = validation_accuracy(dict, den, validation);
      if (acc > best_acc || (acc == best_acc && lambda < best_lambda)) {
        best_acc = acc;
        best_lambda = lambda;
      }
    }
    return best_lambda;
  };

  const double coarse = best_of(grid);
  if (grid.size() == 1) return coarse;

  std::vector<double> fine;
  for (int step = -5; step <= 5; ++step) {
    const double candidate = coarse + step * (coarse / 10.0);
    if (candidate > 0.0) fine.push_back(candidate);
  }
  return best_of(fine);
}

}  // namespace sparsewarn
