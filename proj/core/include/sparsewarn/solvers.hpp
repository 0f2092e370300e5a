#ifndef SPARSEWARN_SOLVERS_HPP
#define SPARSEWARN_SOLVERS_HPP

#include <Eigen/Core>
#include <vector>

namespace sparsewarn {

/// Shared knobs for the sparse solvers. The objective convention everywhere is
///   f(x) = ||Dx - y||_2^2 + lambda ||x||_1
/// with no 1/2 factor, so the proximal soft-threshold level is lambda/(2L).
/// support_tol is relative to the solution's peak magnitude; the resolved
/// absolute threshold is stored on the solution.
struct SolverParams {
  double lambda = 0.01;
  int max_iter = 10000;
  double tol = 1e-8;          // relative objective-change convergence tolerance
  double support_tol = 1e-6;  // support threshold as a fraction of ||x||_inf
  double rho = 1.0;           // ADMM penalty
  double lipschitz = 0.0;     // cached largest squared singular value; 0 = estimate

  void validate() const;
};

struct SparseSolution {
  Eigen::VectorXd coefficients;
  std::vector<int> support;       // sorted indices with |x_i| > support_threshold
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  double support_threshold = 0.0;
  std::vector<double> history;    // per-iteration objective (residual norm for OMP)
};

double lasso_objective(const Eigen::MatrixXd& D, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& x, double lambda);

/// KKT residuals of the Lasso objective at x:
///  - active:   max over support of |2 d_iᵀ(Dx-y) + lambda sign(x_i)|
///  - inactive: max over the rest of |2 d_iᵀ(Dx-y)|
struct KktReport {
  double max_active_violation = 0.0;
  double max_inactive_correlation = 0.0;
};

KktReport lasso_kkt(const Eigen::MatrixXd& D, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& x, double lambda, double support_threshold);

/// Acceptance bounds: active <= 10 tol lambda, inactive <= lambda (1 + 10 tol).
bool lasso_kkt_satisfied(const KktReport& report, double lambda, double tol);

/// Largest squared singular value of D by power iteration (deterministic
/// start), with a small safety factor so 1/L stays a valid step size.
double squared_spectral_norm(const Eigen::MatrixXd& D);

/// Greedy orthogonal matching pursuit with per-step least-squares refit.
/// Stops at k atoms or when the residual norm drops below params.tol. A
/// numerically singular selected submatrix aborts with the partial solution
/// flagged unconverged.
SparseSolution omp(const Eigen::MatrixXd& D, const Eigen::VectorXd& y, int k,
                   const SolverParams& params = {});

/// Proximal-gradient (ISTA) and its Nesterov-accelerated variant (FISTA).
/// Convergence requires both the relative objective change below params.tol
/// and the KKT bounds above, so a reported-converged solution always carries a
/// valid certificate.
SparseSolution ista(const Eigen::MatrixXd& D, const Eigen::VectorXd& y,
                    const SolverParams& params = {});
SparseSolution fista(const Eigen::MatrixXd& D, const Eigen::VectorXd& y,
                     const SolverParams& params = {});

/// Split-variable ADMM with a cached factorization of the x-update system.
SparseSolution admm_lasso(const Eigen::MatrixXd& D, const Eigen::VectorXd& y,
                          const SolverParams& params = {});

/// LARS-style regularization path from lambda_max = ||2Dᵀy||_inf down to
/// lambda_target, with atoms joining and leaving the active set.
SparseSolution homotopy(const Eigen::MatrixXd& D, const Eigen::VectorXd& y,
                        double lambda_target, const SolverParams& params = {});

}  // namespace sparsewarn

#endif
