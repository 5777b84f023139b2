#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dws/instance.hpp"
#include "dws/linalg.hpp"
#include "dws/working_set.hpp"

namespace dws {

struct ZetaGamma {
  Vec zeta;   // subgradient of eta ||.||_1 at x
  Vec gamma;  // grad + zeta, zero off E
};

/// zeta_i = -grad_i off E and -sign(grad_i) eta on E; gamma = grad + zeta.
/// `violating` lists E in any order.
ZetaGamma zeta_gamma(std::span<const double> grad, double eta,
                     std::span<const std::size_t> violating);

/// Global optimality report for x.
struct Certificate {
  Vec gamma;                 // minimum-magnitude element of dF(x)
  double max_violation = 0;  // ||gamma||_inf
  double tolerance = 0;
  bool optimal = false;      // max_violation <= tolerance
  std::vector<WeightedIndex> worst;  // up to 5 largest |gamma_i|
};

/// Per coordinate: max(|g_i| - eta, 0) where x_i = 0, |g_i + sign(x_i) eta|
/// elsewhere.
Certificate check_global(const Instance& inst, std::span<const double> x, double tol);

/// E at x for the analysis checks: |g_j| > eta with x_j = 0, heaviest first.
std::vector<WeightedIndex> analysis_violating_set(std::span<const double> grad, double eta,
                                                  std::span<const double> x);

/// Unit conical combination sum_i c_i s_i with s_i = -sign(g_i) e_i, c >= 0.
/// Throws InputError if all coefficients vanish.
Vec conical_direction(std::span<const double> grad, std::span<const std::size_t> idx,
                      std::span<const double> coeffs, std::size_t n);

struct LineMinimum {
  double t_star = 0;
  double f_x = 0;
  double f_y = 0;
  double gamma_dot_step = 0;  // <gamma_x, y - x>
  Vec y;

  /// (F(x) - F(y)) - (-1/2 <gamma_x, y - x>); zero in exact arithmetic.
  double identity_gap() const { return (f_x - f_y) + 0.5 * gamma_dot_step; }
};

/// Exact minimizer of F along x + t n, t >= 0, for a unit conical combination
/// n of the signed axes over E: t* = <-gamma_x, n> / ||A n||^2. Throws
/// InputError if n is not such a combination and NumericalError if A n = 0.
LineMinimum line_minimizer(const Instance& inst, std::span<const double> x,
                           std::span<const double> n_dir);

struct DescentReport {
  Vec direction;              // unit, supported on G
  IndexList g_set;            // tau_next heaviest of E, heaviest first
  IndexList h_set;            // G plus any supplied optimum-support indices in E
  double cos_bound_required = 0;
  double cos_achieved = 0;
  bool premise_holds = false;  // every i in G has cos >= 1/sqrt(2 (s + tau) ln tau), |H \ G| <= s
  std::size_t stage = 0;       // pairing stage at which the direction was taken
  double line_min_t = 0;       // filled by attach_line_search
  double predicted_gain = 0;   // F(x) - F(y) for that step
};

/// Constructive descent direction from the tau_next heaviest violators:
/// start from the signed axes of the largest power-of-two prefix of G and
/// repeatedly average neighbouring pairs, (v_i + v_j)/sqrt(2), stopping once a
/// combined vector is within pi/3 of -gamma restricted to H. Returns the
/// best-aligned vector visited. `exclude` removes coordinates (the current
/// support) from E; `optimum_support` are indices believed to be in supp(x*)
/// and extend H.
DescentReport build_descent(std::span<const double> grad, double eta, std::size_t tau_next,
                            std::size_t s_est, std::span<const std::size_t> exclude = {},
                            std::span<const std::size_t> optimum_support = {});

/// Fills line_min_t and predicted_gain of `report` for iterate x.
void attach_line_search(DescentReport& report, const Instance& inst, std::span<const double> x);

enum class ContractionStatus { checked, skipped_premise, skipped_small_tau, skipped_last };

struct ContractionRow {
  std::size_t r = 0;
  ContractionStatus status = ContractionStatus::skipped_last;
  double ratio = 0;
  double bound = 0;
  bool passed = true;
};

/// For each recorded x_r with a successor, checks
/// (F(x_{r+1}) - F*) / (F(x_r) - F*) <= 1 - eps tau/(8 (s + tau) ln tau) + 1e-9
/// whenever F(x_r) > F* + eps ||x* - x_r||^2 and tau_{r+1} >= 2. The trace
/// must carry iterates. s = |supp(x_star)|.
std::vector<ContractionRow> contraction_check(const Instance& inst, const RunResult& run,
                                              std::span<const double> x_star, double eps);

struct LowerBoundCheck {
  bool skipped = false;  // x_star == 0
  bool passed = true;
  double value = 0;      // F(x_star)
  double bound = 0;      // eta ||b|| / 4
};

/// F(x*) >= eta ||b|| / 4 - 1e-9 for nonzero x*.
LowerBoundCheck optimum_lower_bound_check(const Instance& inst, std::span<const double> x_star);

}  // namespace dws
