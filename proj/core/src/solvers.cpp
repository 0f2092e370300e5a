#include "sparsewarn/solvers.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>
#include <limits>

#include "sparsewarn/errors.hpp"

namespace sparsewarn {

namespace {

double soft_threshold(double v, double level) {
  if (v > level) return v - level;
  if (v < -level) return v + level;
  return 0.0;
}

double resolve_support_threshold(const Eigen::VectorXd& x, double rel_tol) {
  const double peak = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
  return rel_tol * peak;
}

void finalize_support(SparseSolution& sol, double rel_tol) {
  sol.support_threshold = resolve_support_threshold(sol.coefficients, rel_tol);
  sol.support.clear();
  for (Eigen::Index i = 0; i < sol.coefficients.size(); ++i)
    if (std::abs(sol.coefficients(i)) > sol.support_threshold)
      sol.support.push_back(static_cast<int>(i));
}

// KKT test from a precomputed gradient half g = Dᵀ(Dx - y).
bool kkt_from_gradient(const Eigen::VectorXd& g, const Eigen::VectorXd& x, double lambda,
                       double rel_support_tol, double tol, double margin) {
  const double threshold = resolve_support_threshold(x, rel_support_tol);
  const double active_bound = margin * 10.0 * tol * lambda;
  const double inactive_bound = lambda * (1.0 + margin * 10.0 * tol);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double corr = 2.0 * g(i);
    if (std::abs(x(i)) > threshold) {
      if (std::abs(corr + lambda * (x(i) > 0 ? 1.0 : -1.0)) > active_bound) return false;
    } else if (std::abs(corr) > inactive_bound) {
      return false;
    }
  }
  return true;
}

}  // namespace

void SolverParams::validate() const {
  if (lambda <= 0.0 || max_iter <= 0 || tol <= 0.0 || support_tol <= 0.0 || rho <= 0.0)
    throw NumericError("solver params: lambda, max_iter, tol, support_tol and rho must be positive");
}

double lasso_objective(const Eigen::MatrixXd& D, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& x, double lambda) {
  return (D * x - y).squaredNorm() + lambda * x.lpNorm<1>();
}

KktReport lasso_kkt(const Eigen::MatrixXd& D, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& x, double lambda, double support_threshold) {
  const Eigen::VectorXd corr = 2.0 * (D.transpose() * (D * x - y));
  KktReport report;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) > support_threshold) {
      const double v = std::abs(corr(i) + lambda * (x(i) > 0 ? 1.0 : -1.0));
      report.max_active_violation = std::max(report.max_active_violation, v);
    } else {
      report.max_inactive_correlation =
          std::max(report.max_inactive_correlation, std::abs(corr(i)));
    }
  }
  return report;
}

bool lasso_kkt_satisfied(const KktReport& report, double lambda, double tol) {
  return report.max_active_violation <= 10.0 * tol * lambda &&
         report.max_inactive_correlation <= lambda * (1.0 + 10.0 * tol);
}

double squared_spectral_norm(const Eigen::MatrixXd& D) {
  const Eigen::Index n = D.cols();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  double estimate = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::VectorXd w = D.transpose() * (D * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    const double next = (D * w).squaredNorm();
    if (iter > 0 && std::abs(next - estimate) <= 1e-12 * next) {
      estimate = next;
      break;
    }
    estimate = next;
    v = w;
  }
  return estimate * (1.0 + 1e-9);
}

SparseSolution omp(const Eigen::MatrixXd& D, const Eigen::VectorXd& y, int k,
                   const SolverParams& params) {
  params.validate();
  const Eigen::Index m = D.rows();
  const Eigen::Index n = D.cols();
  if (k < 1 || k > m)
    throw NumericError("omp: sparsity budget k=" + std::to_string(k) +
                       " outside [1, m=" + std::to_string(m) + "]");

  SparseSolution sol;
  sol.coefficients = Eigen::VectorXd::Zero(n);
  sol.converged = true;

  Eigen::VectorXd residual = y;
  std::vector<int> selected;
  std::vector<char> in_set(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd coeffs_on_selected;

  for (int step = 0; step < k; ++step) {
    const Eigen::VectorXd corr = D.transpose() * residual;
    int best = -1;
    double best_abs = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (in_set[static_cast<std::size_t>(i)]) continue;
      const double a = std::abs(corr(i));
      if (a > best_abs) {
        best_abs = a;
        best = static_cast<int>(i);
      }
    }
    if (best < 0 || best_abs == 0.0) break;  // nothing correlates; greedy is done

    selected.push_back(best);
    in_set[static_cast<std::size_t>(best)] = 1;

    Eigen::MatrixXd sub(m, static_cast<Eigen::Index>(selected.size()));
    for (std::size_t j = 0; j < selected.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = D.col(selected[j]);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    if (qr.rank() < static_cast<Eigen::Index>(selected.size())) {
      selected.pop_back();
      sol.converged = false;  // singular refit, abort with the partial solution
      break;
    }
    coeffs_on_selected = qr.solve(y);
    residual = y - sub * coeffs_on_selected;
    sol.iterations = step + 1;
    sol.history.push_back(residual.norm());
    if (residual.norm() < params.tol) break;
  }

  for (std::size_t j = 0; j < selected.size(); ++j)
    sol.coefficients(selected[j]) = coeffs_on_selected(static_cast<Eigen::Index>(j));
  sol.objective = (D * sol.coefficients - y).squaredNorm();
  finalize_support(sol, params.support_tol);
  return sol;
}

namespace {

SparseSolution proximal_gradient(const Eigen::MatrixXd& D, const Eigen::VectorXd& y,
                                 const SolverParams& params, bool accelerated) {
  params.validate();
  const Eigen::Index n = D.cols();
  const double big = params.lipschitz > 0.0 ? params.lipschitz : squared_spectral_norm(D);
  if (big == 0.0) {
    SparseSolution sol;
    sol.coefficients = Eigen::VectorXd::Zero(n);
    sol.converged = true;
    sol.objective = y.squaredNorm();
    finalize_support(sol, params.support_tol);
    return sol;
  }
  const double step = 1.0 / big;
  const double shrink = params.lambda / (2.0 * big);

  SparseSolution sol;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = x;
  Eigen::VectorXd grad_half(n), stepped(n), x_next(n), residual(D.rows());
  double momentum = 1.0;
  double obj_prev = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < params.max_iter; ++iter) {
    residual.noalias() = D * z - y;
    grad_half.noalias() = D.transpose() * residual;

    // Objective and KKT are tracked at the primal iterate x (== z for the
    // unaccelerated variant).
    double obj;
    if (accelerated && iter > 0) {
      obj = (D * x - y).squaredNorm() + params.lambda * x.lpNorm<1>();
    } else {
      obj = residual.squaredNorm() + params.lambda * x.lpNorm<1>();
    }
    if (!std::isfinite(obj))
      throw NumericError("lasso solver diverged (step-size estimate L=" + std::to_string(big) +
                         ")");
    sol.history.push_back(obj);
    sol.iterations = iter;

    if (std::abs(obj_prev - obj) <= params.tol * std::max(std::abs(obj_prev), 1e-300)) {
      const bool kkt_ok =
          accelerated && iter > 0
              ? kkt_from_gradient(D.transpose() * (D * x - y), x, params.lambda,
                                  params.support_tol, params.tol, 0.5)
              : kkt_from_gradient(grad_half, x, params.lambda, params.support_tol, params.tol,
                                  0.5);
      if (kkt_ok) {
        sol.converged = true;
        sol.coefficients = x;
        sol.objective = obj;
        finalize_support(sol, params.support_tol);
        return sol;
      }
    }
    obj_prev = obj;

    stepped.noalias() = z - step * grad_half;
    for (Eigen::Index i = 0; i < n; ++i) x_next(i) = soft_threshold(stepped(i), shrink);

    if (accelerated) {
      const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      z = x_next + ((momentum - 1.0) / momentum_next) * (x_next - x);
      momentum = momentum_next;
    } else {
      z = x_next;
    }
    x = x_next;
    if (!x.allFinite())
      throw NumericError("lasso solver diverged (step-size estimate L=" + std::to_string(big) +
                         ")");
  }

  sol.converged = false;
  sol.coefficients = x;
  sol.objective = lasso_objective(D, y, x, params.lambda);
  finalize_support(sol, params.support_tol);
  return sol;
}

}  // namespace

SparseSolution ista(const Eigen::MatrixXd& D, const Eigen::VectorXd& y,
                    const SolverParams& params) {
  return proximal_gradient(D, y, params, false);
}

SparseSolution fista(const Eigen::MatrixXd& D, const Eigen::VectorXd& y,
                     const SolverParams& params) {
  return proximal_gradient(D, y, params, true);
}

SparseSolution admm_lasso(const Eigen::MatrixXd& D, const Eigen::VectorXd& y,
                          const SolverParams& params) {
  params.validate();
  const Eigen::Index m = D.rows();
  const Eigen::Index n = D.cols();
  const double rho = params.rho;

  // Cached factorization of the x-update system (2DᵀD + rho I); the m x m
  // Woodbury form is used when the dictionary is overcomplete.
  const bool direct = n <= m;
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (direct) {
    Eigen::MatrixXd sys = 2.0 * (D.transpose() * D);
    sys.diagonal().array() += rho;
    llt.compute(sys);
  } else {
    Eigen::MatrixXd sys = 2.0 * (D * D.transpose());
    sys.diagonal().array() += rho;
    llt.compute(sys);
  }
  if (llt.info() != Eigen::Success)
    throw NumericError("admm_lasso: factorization of the x-update system failed");

  const Eigen::VectorXd dty2 = 2.0 * (D.transpose() * y);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);

  SparseSolution sol;
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  for (int iter = 1; iter <= params.max_iter; ++iter) {
    const Eigen::VectorXd q = dty2 + rho * (z - u);
    if (direct) {
      x = llt.solve(q);
    } else {
      x = (q - 2.0 * (D.transpose() * llt.solve(D * q))) / rho;
    }
    const Eigen::VectorXd z_old = z;
    for (Eigen::Index i = 0; i < n; ++i)
      z(i) = soft_threshold(x(i) + u(i), params.lambda / rho);
    u += x - z;

    if (!z.allFinite())
      throw NumericError("admm_lasso: diverged at iteration " + std::to_string(iter));

    const double primal = (x - z).norm();
    const double dual = rho * (z - z_old).norm();
    const double obj = lasso_objective(D, y, z, params.lambda);
    sol.history.push_back(obj);
    sol.iterations = iter;

    const double primal_bound =
        params.tol * sqrt_n * std::max(1.0, std::max(x.norm(), z.norm()));
    const double dual_bound = params.tol * sqrt_n * std::max(1.0, rho * u.norm());
    if (primal <= primal_bound && dual <= dual_bound) {
      const Eigen::VectorXd grad_half = D.transpose() * (D * z - y);
      if (kkt_from_gradient(grad_half, z, params.lambda, params.support_tol, params.tol, 0.5)) {
        sol.converged = true;
        break;
      }
    }
  }

  sol.coefficients = z;
  sol.objective = lasso_objective(D, y, z, params.lambda);
  finalize_support(sol, params.support_tol);
  return sol;
}

SparseSolution homotopy(const Eigen::MatrixXd& D, const Eigen::VectorXd& y, double lambda_target,
                        const SolverParams& params) {
  params.validate();
  if (lambda_target <= 0.0) throw NumericError("homotopy: lambda_target must be positive");
  const Eigen::Index n = D.cols();

  SparseSolution sol;
  sol.coefficients = Eigen::VectorXd::Zero(n);

  const Eigen::VectorXd corr0 = 2.0 * (D.transpose() * y);
  double lambda = corr0.cwiseAbs().maxCoeff();
  sol.history.push_back(lambda);
  if (lambda_target >= lambda || lambda == 0.0) {
    sol.converged = true;
    sol.objective = y.squaredNorm() + 0.0;
    finalize_support(sol, params.support_tol);
    return sol;
  }

  std::vector<int> active;
  std::vector<double> signs;
  {
    Eigen::Index first = 0;
    corr0.cwiseAbs().maxCoeff(&first);
    active.push_back(static_cast<int>(first));
    signs.push_back(corr0(first) > 0 ? 1.0 : -1.0);
  }

  const int max_events = std::max(params.max_iter, 10 * static_cast<int>(n));
  Eigen::VectorXd x_active = Eigen::VectorXd::Zero(1);

  for (int event = 0; event < max_events; ++event) {
    const Eigen::Index a = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd sub(D.rows(), a);
    for (Eigen::Index j = 0; j < a; ++j) sub.col(j) = D.col(active[static_cast<std::size_t>(j)]);
    Eigen::Map<const Eigen::VectorXd> sign_vec(signs.data(), a);

    Eigen::LLT<Eigen::MatrixXd> llt(sub.transpose() * sub);
    if (llt.info() != Eigen::Success)
      throw NumericError("homotopy: active-set Gram matrix is numerically singular");
    const Eigen::VectorXd direction = llt.solve(sign_vec);  // dx_A = (dlambda/2) * direction

    // Correlations decay affinely: c_j(lambda - t) = c_j(lambda) - t * slope_j.
    const Eigen::VectorXd pushed = sub * direction;
    const Eigen::VectorXd slope = D.transpose() * pushed;
    const Eigen::VectorXd corr =
        2.0 * (D.transpose() * (y - sub * x_active));

    const double remaining = lambda - lambda_target;
    double best_step = remaining;
    int join_idx = -1;
    double join_sign = 0.0;
    int leave_pos = -1;

    std::vector<char> is_active(static_cast<std::size_t>(n), 0);
    for (int idx : active) is_active[static_cast<std::size_t>(idx)] = 1;

    const double step_floor = 1e-13 * lambda;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (is_active[static_cast<std::size_t>(j)]) continue;
      // Join when c_j hits +/- (lambda - t).
      const double denom_pos = 1.0 - slope(j);
      if (std::abs(denom_pos) > 1e-15) {
        const double t = (lambda - corr(j)) / denom_pos;
        if (t > step_floor && t < best_step) {
          best_step = t;
          join_idx = static_cast<int>(j);
          join_sign = 1.0;
          leave_pos = -1;
        }
      }
      const double denom_neg = 1.0 + slope(j);
      if (std::abs(denom_neg) > 1e-15) {
        const double t = (lambda + corr(j)) / denom_neg;
        if (t > step_floor && t < best_step) {
          best_step = t;
          join_idx = static_cast<int>(j);
          join_sign = -1.0;
          leave_pos = -1;
        }
      }
    }
    for (Eigen::Index j = 0; j < a; ++j) {
      // Leave when an active coefficient crosses zero.
      if (direction(j) == 0.0) continue;
      const double t = -2.0 * x_active(j) / direction(j);
      if (t > step_floor && t < best_step) {
        best_step = t;
        leave_pos = static_cast<int>(j);
        join_idx = -1;
      }
    }

    x_active += 0.5 * best_step * direction;
    lambda -= best_step;
    sol.history.push_back(lambda);
    sol.iterations = event + 1;

    if (join_idx < 0 && leave_pos < 0) break;  // reached lambda_target on this segment

    if (join_idx >= 0) {
      active.push_back(join_idx);
      signs.push_back(join_sign);
      Eigen::VectorXd grown(a + 1);
      grown.head(a) = x_active;
      grown(a) = 0.0;
      x_active = grown;
      if (static_cast<Eigen::Index>(active.size()) > D.rows())
        throw NumericError("homotopy: active set exceeded the measurement dimension");
    } else {
      x_active(leave_pos) = 0.0;
      active.erase(active.begin() + leave_pos);
      signs.erase(signs.begin() + leave_pos);
      Eigen::VectorXd shrunk(a - 1);
      Eigen::Index w = 0;
      for (Eigen::Index j = 0; j < a; ++j)
        if (j != leave_pos) shrunk(w++) = x_active(j);
      x_active = shrunk;
    }
    if (event + 1 == max_events)
      throw NumericError("homotopy: exceeded maximum number of path breakpoints");
  }

  for (std::size_t j = 0; j < active.size(); ++j)
    sol.coefficients(active[j]) = x_active(static_cast<Eigen::Index>(j));
  sol.objective = lasso_objective(D, y, sol.coefficients, lambda_target);
  finalize_support(sol, params.support_tol);
  const KktReport report =
      lasso_kkt(D, y, sol.coefficients, lambda_target, sol.support_threshold);
  sol.converged = lasso_kkt_satisfied(report, lambda_target, params.tol);
  return sol;
}

}  // namespace sparsewarn
