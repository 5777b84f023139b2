#include "dws/strategies.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "dws/errors.hpp"

namespace dws {

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::dws: return "dws";
    case StrategyKind::doubling: return "doubling";
    case StrategyKind::modified_dws: return "modified_dws";
    case StrategyKind::full: return "full";
  }
  return "?";
}

std::optional<StrategyKind> parse_strategy(std::string_view name) {
  for (auto k : {StrategyKind::dws, StrategyKind::doubling, StrategyKind::modified_dws,
                 StrategyKind::full})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

IndexList doubling_next_ws(const IndexList& supp, const std::vector<WeightedIndex>& violating,
                           std::size_t p0, std::size_t n) {
  const std::size_t target = std::min(n, std::max(p0, 2 * supp.size()));
  const std::size_t room = target > supp.size() ? target - supp.size() : 0;
  return prune_and_extend(supp, violating, room);
}

IndexList DoublingPolicy::initial(std::span<const double> grad0) const {
  return init_working_set(grad0, std::min(p0_, grad0.size()));
}

NextStep DoublingPolicy::next(const IterationView& it) const {
  IndexList w = doubling_next_ws(it.supp, it.violating, p0_, it.n);
  const std::size_t added = w.size() - it.supp.size();
  return {std::move(w), added, 0};
}

ModifiedDwsPolicy::ModifiedDwsPolicy(const DwsConfig& resolved) : DwsPolicy(resolved) {
  cfg_.p0 = cfg_.tau;
}

TauStep modified_dws_next(std::size_t r, std::size_t supp_now, std::size_t supp_prev,
                          std::size_t a_prev, double h, std::size_t tau, std::size_t k,
                          std::size_t e_size) {
  return next_tau(supp_now, r == 1 ? tau : supp_prev, a_prev, h, tau, k, e_size);
}

RunResult run_full(const Instance& inst, const SolverConfig& scfg, double kkt_eps) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const std::size_t n = inst.n();
  const Vec atb = inst.atb();
  RunResult out;

  const Vec zero(n, 0.0);
  const RestrictedSolution sol = solve_restricted(inst.a, inst.b, inst.eta, zero, scfg);
  out.x = sol.x_w;
  const IndexList supp = support(out.x);
  const Vec grad = gradient(inst.a, atb, out.x, supp);
  // Every coordinate is free, so violations are checked everywhere.
  const auto e = violating_set(grad, inst.eta, kkt_eps, {});

  TraceRecord rec;
  rec.r = 1;
  rec.ws_size = n;
  rec.supp_size = supp.size();
  rec.e_size = e.size();
  rec.tau_next = 0;
  rec.objective = objective(inst.a, inst.b, inst.eta, out.x);
  rec.inner_iters = sol.iters_used;
  rec.inner_converged = sol.converged;
  rec.cum_seconds = std::chrono::duration<double>(clock::now() - start).count();
  out.trace.push_back(std::move(rec));
  out.terminated = e.empty();
  out.wall_seconds = out.trace.back().cum_seconds;
  return out;
}

RunResult run_strategy(StrategyKind kind, const Instance& inst, const DwsConfig& cfg,
                       const SolverConfig& scfg) {
  const DwsConfig resolved = cfg.resolve(inst, scfg);
  switch (kind) {
    case StrategyKind::dws:
      return run_working_set(inst, DwsPolicy(resolved), resolved, scfg);
    case StrategyKind::doubling:
      return run_working_set(inst, DoublingPolicy(resolved.p0), resolved, scfg);
    case StrategyKind::modified_dws: {
      DwsConfig m = resolved;
      m.p0 = std::min(resolved.tau, inst.n());
      return run_working_set(inst, ModifiedDwsPolicy(m), m, scfg);
    }
    case StrategyKind::full:
      return run_full(inst, scfg, resolved.kkt_eps);
  }
  throw InputError("unknown strategy");
}

}  // namespace dws
