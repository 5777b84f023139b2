#pragma once

#include <cstddef>
#include <span>

#include "dws/instance.hpp"
#include "dws/linalg.hpp"

namespace dws {

enum class InnerSolver { gpsr_bb, ista_oracle };

struct SolverConfig {
  double tol_inner = 1e-9;
  std::size_t max_inner_iters = 100000;
  InnerSolver variant = InnerSolver::gpsr_bb;
  double alpha_min = 1e-30;
  double alpha_max = 1e30;

  void validate() const;  // throws InputError
};

/// Default inner tolerance 1e-9 * (1 + ||A^t b||_inf).
double default_tol_inner(const Instance& inst);

struct RestrictedSolution {
  Vec x_w;
  std::size_t iters_used = 0;
  double f_value = 0.0;
  double kkt_residual = 0.0;
  bool converged = false;
};

/// Max over i of max(|g_i| - eta, 0) where x_i = 0 and |g_i + sign(x_i) eta|
/// elsewhere, with g the smooth gradient at x.
double kkt_residual(std::span<const double> grad, std::span<const double> x, double eta);

/// Minimizes 1/2 ||A_w x - b||^2 + eta ||x||_1 starting from `warm`. Stops
/// once kkt_residual <= cfg.tol_inner; otherwise returns the last iterate with
/// converged = false after cfg.max_inner_iters. Throws NumericalError on NaN.
RestrictedSolution solve_restricted(const DenseMatrix& a_w, std::span<const double> b, double eta,
                                    std::span<const double> warm, const SolverConfig& cfg);

/// Proximal gradient over all n variables to KKT residual <= tol. Throws
/// NumericalError if 10^7 iterations do not suffice.
Vec solve_full_oracle(const Instance& inst, double tol);

/// sign(v) with sign(0) = 0.
inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// sign(v) max(|v| - t, 0).
inline double soft_threshold(double v, double t) {
  const double m = (v < 0.0 ? -v : v) - t;
  return m > 0.0 ? sign(v) * m : 0.0;
}

}  // namespace dws
