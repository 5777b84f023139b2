#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dws/instance.hpp"
#include "dws/linalg.hpp"
#include "dws/solver.hpp"

namespace dws {

/// Outer-loop parameters. Zero-valued `tau` and negative `kkt_eps` mean
/// "use the default" and are filled in by resolve().
struct DwsConfig {
  double h = 2.0;
  std::size_t tau = 0;       // default floor(4 ln^2 n), capped at k
  std::size_t p0 = 10;
  double kkt_eps = -1.0;     // default 10 * tol_inner
  std::size_t max_outer = 500;
  bool record_sets = false;      // keep W_r and E_r in the trace
  bool record_iterates = false;  // keep x_r in the trace

  /// Copy with defaults filled in and invariants checked (throws InputError).
  DwsConfig resolve(const Instance& inst, const SolverConfig& scfg) const;
};

/// floor(4 ln^2 n).
std::size_t default_tau(std::size_t n);

struct WeightedIndex {
  std::size_t index;
  double weight;  // |grad_index|
  bool operator==(const WeightedIndex&) const = default;
};

/// All j not in `exclude` with |grad_j| > eta + kkt_eps, heaviest first, ties
/// by ascending index. `exclude` must be sorted ascending.
std::vector<WeightedIndex> violating_set(std::span<const double> grad, double eta, double kkt_eps,
                                         std::span<const std::size_t> exclude);

struct TauStep {
  std::size_t tau_next;
  std::size_t a_now;
  int m;
};

/// Working-set growth rule. m is the smallest integer >= -1 with
/// supp_now <= h^m tau + supp_prev, a_now = min(m + 1, a_prev + 1) and
/// tau_next = min(floor(h^a_now tau), k, e_size).
TauStep next_tau(std::size_t supp_now, std::size_t supp_prev, std::size_t a_prev, double h,
                 std::size_t tau, std::size_t k, std::size_t e_size);

/// The p0 indices with largest |grad0_j|, ties by ascending index, returned
/// sorted ascending.
IndexList init_working_set(std::span<const double> grad0, std::size_t p0);

/// Per outer iteration r (1-based). The first eight fields are the CSV trace.
struct TraceRecord {
  std::size_t r = 0;
  std::size_t ws_size = 0;
  std::size_t supp_size = 0;
  std::size_t e_size = 0;
  std::size_t tau_next = 0;
  double objective = 0.0;
  std::size_t inner_iters = 0;
  double cum_seconds = 0.0;

  std::size_t a = 0;  // a_r (0 for policies without a growth exponent)
  bool inner_converged = true;
  IndexList working_set;   // W_r, when recorded
  IndexList violating;     // E_r (ascending), when recorded
  Vec x;                   // x_r, when recorded
};

struct RunResult {
  Vec x;
  std::vector<TraceRecord> trace;
  bool terminated = false;  // stopped because E_r was empty
  bool truncated = false;   // hit max_outer
  double wall_seconds = 0.0;

  std::size_t sum_tau() const;
  std::size_t max_ws() const;
};

/// What a policy sees after the solve of iteration r.
struct IterationView {
  std::size_t r;
  std::size_t n;
  std::size_t k;
  const IndexList& supp;                      // supp(x_r), ascending
  std::size_t supp_prev;                      // |supp(x_{r-1})| as the policy defines it
  std::size_t a_prev;
  const std::vector<WeightedIndex>& violating;  // E_r, heaviest first
};

struct NextStep {
  IndexList w_next;  // ascending
  std::size_t tau_next;
  std::size_t a_now;
};

/// How the working set evolves; the loop in run_working_set is shared.
class WorkingSetPolicy {
 public:
  virtual ~WorkingSetPolicy() = default;
  virtual std::string name() const = 0;
  virtual IndexList initial(std::span<const double> grad0) const = 0;
  /// Value of |supp(x_0)| used by the growth rule at r = 1.
  virtual std::size_t supp_before_first() const { return 0; }
  virtual NextStep next(const IterationView& it) const = 0;
};

/// supp(x_r) plus the first `count` entries of E_r, sorted ascending.
IndexList prune_and_extend(const IndexList& supp, const std::vector<WeightedIndex>& violating,
                           std::size_t count);

class DwsPolicy : public WorkingSetPolicy {
 public:
  explicit DwsPolicy(const DwsConfig& resolved) : cfg_(resolved) {}
  std::string name() const override { return "dws"; }
  IndexList initial(std::span<const double> grad0) const override;
  NextStep next(const IterationView& it) const override;

 protected:
  DwsConfig cfg_;
};

/// Shared outer loop: solve on W_r, form the full gradient, extract E_r
/// outside W_r, stop when it is empty, otherwise let the policy choose W_{r+1}.
/// `cfg` must already be resolved.
RunResult run_working_set(const Instance& inst, const WorkingSetPolicy& policy,
                          const DwsConfig& cfg, const SolverConfig& scfg);

/// Dynamic working set method with the given parameters (defaults resolved here).
RunResult run_dws(const Instance& inst, const DwsConfig& cfg, const SolverConfig& scfg);

}  // namespace dws
