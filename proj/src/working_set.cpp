#include "dws/working_set.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "dws/errors.hpp"

namespace dws {

namespace {

bool heavier(const WeightedIndex& a, const WeightedIndex& b) {
  return a.weight > b.weight || (a.weight == b.weight && a.index < b.index);
}

}  // namespace

std::size_t default_tau(std::size_t n) {
  const double l = std::log(static_cast<double>(n));
  return static_cast<std::size_t>(std::floor(4.0 * l * l));
}

DwsConfig DwsConfig::resolve(const Instance& inst, const SolverConfig& scfg) const {
  DwsConfig out = *this;
  const std::size_t k = inst.k(), n = inst.n();
  if (!(h > 1.0 && h <= 2.0)) throw InputError("h must lie in (1, 2]");
  if (out.tau == 0) out.tau = std::clamp<std::size_t>(default_tau(n), 1, k);
  if (out.tau < 1 || out.tau > k)
    throw InputError("tau = " + std::to_string(out.tau) + " outside [1, k = " + std::to_string(k) + "]");
  if (out.p0 < 1) throw InputError("p0 must be at least 1");
  out.p0 = std::min(out.p0, n);
  if (out.kkt_eps < 0.0) out.kkt_eps = 10.0 * scfg.tol_inner;
  if (out.max_outer < 1) throw InputError("max_outer must be at least 1");
  return out;
}

std::vector<WeightedIndex> violating_set(std::span<const double> grad, double eta, double kkt_eps,
                                         std::span<const std::size_t> exclude) {
  const double threshold = eta + kkt_eps;
  std::vector<WeightedIndex> out;
  std::size_t ex = 0;
  for (std::size_t j = 0; j < grad.size(); ++j) {
    while (ex < exclude.size() && exclude[ex] < j) ++ex;
    if (ex < exclude.size() && exclude[ex] == j) continue;
    const double w = std::abs(grad[j]);
    if (w > threshold) out.push_back({j, w});
  }
  std::sort(out.begin(), out.end(), heavier);
  return out;
}

TauStep next_tau(std::size_t supp_now, std::size_t supp_prev, std::size_t a_prev, double h,
                 std::size_t tau, std::size_t k, std::size_t e_size) {
  // Walk m = -1, 0, 1, ... with repeated multiplication so exact powers of h
  // compare exactly.
  int m = -1;
  double step = static_cast<double>(tau) / h;
  const double now = static_cast<double>(supp_now), prev = static_cast<double>(supp_prev);
  while (now > step + prev) {
    step *= h;
    ++m;
  }
  const std::size_t a_now = std::min(static_cast<std::size_t>(m + 1), a_prev + 1);
  double grow = static_cast<double>(tau);
  for (std::size_t i = 0; i < a_now && grow < static_cast<double>(k); ++i) grow *= h;
  const auto capped = static_cast<std::size_t>(std::floor(std::min(grow, static_cast<double>(k))));
  return {std::min({capped, k, e_size}), a_now, m};
}

IndexList init_working_set(std::span<const double> grad0, std::size_t p0) {
  if (p0 < 1 || p0 > grad0.size()) throw InputError("p0 must lie in [1, n]");
  std::vector<WeightedIndex> all(grad0.size());
  for (std::size_t j = 0; j < grad0.size(); ++j) all[j] = {j, std::abs(grad0[j])};
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(p0), all.end(), heavier);
  IndexList w(p0);
  for (std::size_t i = 0; i < p0; ++i) w[i] = all[i].index;
  std::sort(w.begin(), w.end());
  return w;
}

IndexList prune_and_extend(const IndexList& supp, const std::vector<WeightedIndex>& violating,
                           std::size_t count) {
  IndexList w = supp;
  count = std::min(count, violating.size());
  for (std::size_t i = 0; i < count; ++i) w.push_back(violating[i].index);
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  return w;
}

IndexList DwsPolicy::initial(std::span<const double> grad0) const {
  return init_working_set(grad0, cfg_.p0);
}

NextStep DwsPolicy::next(const IterationView& it) const {
  const TauStep t = next_tau(it.supp.size(), it.supp_prev, it.a_prev, cfg_.h, cfg_.tau, it.k,
                             it.violating.size());
  return {prune_and_extend(it.supp, it.violating, t.tau_next), t.tau_next, t.a_now};
}

std::size_t RunResult::sum_tau() const {
  std::size_t s = 0;
  for (const auto& t : trace) s += t.tau_next;
  return s;
}

std::size_t RunResult::max_ws() const {
  std::size_t m = 0;
  for (const auto& t : trace) m = std::max(m, t.ws_size);
  return m;
}

RunResult run_working_set(const Instance& inst, const WorkingSetPolicy& policy,
                          const DwsConfig& cfg, const SolverConfig& scfg) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto seconds = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

  const std::size_t n = inst.n(), k = inst.k();
  const Vec atb = inst.atb();
  RunResult out;
  out.x.assign(n, 0.0);

  Vec grad0(n);
  for (std::size_t j = 0; j < n; ++j) grad0[j] = -atb[j];
  if (violating_set(grad0, inst.eta, cfg.kkt_eps, {}).empty()) {
    out.terminated = true;
    out.wall_seconds = seconds();
    return out;
  }

  IndexList w = policy.initial(grad0);
  std::size_t supp_prev = policy.supp_before_first();
  std::size_t a_prev = 0;

  for (std::size_t r = 1;; ++r) {
    if (r > cfg.max_outer) {
      out.truncated = true;
      break;
    }
    const DenseMatrix a_w = inst.a.columns(w);
    const Vec warm = gather(out.x, w);
    const RestrictedSolution sol = solve_restricted(a_w, inst.b, inst.eta, warm, scfg);
    out.x = scatter(sol.x_w, w, n);

    const IndexList supp = support(out.x);
    const Vec grad = gradient(inst.a, atb, out.x, supp);
    const auto e = violating_set(grad, inst.eta, cfg.kkt_eps, w);
    const NextStep step = policy.next({r, n, k, supp, supp_prev, a_prev, e});

    TraceRecord rec;
    rec.r = r;
    rec.ws_size = w.size();
    rec.supp_size = supp.size();
    rec.e_size = e.size();
    rec.tau_next = step.tau_next;
    rec.objective = objective(inst.a, inst.b, inst.eta, out.x);
    rec.inner_iters = sol.iters_used;
    rec.a = step.a_now;
    rec.inner_converged = sol.converged;
    if (cfg.record_sets) {
      rec.working_set = w;
      for (const auto& wi : e) rec.violating.push_back(wi.index);
      std::sort(rec.violating.begin(), rec.violating.end());
    }
    if (cfg.record_iterates) rec.x = out.x;
    rec.cum_seconds = seconds();
    out.trace.push_back(std::move(rec));

    if (e.empty()) {
      out.terminated = true;
      break;
    }
    w = step.w_next;
    supp_prev = supp.size();
    a_prev = step.a_now;
  }
  out.wall_seconds = seconds();
  return out;
}

RunResult run_dws(const Instance& inst, const DwsConfig& cfg, const SolverConfig& scfg) {
  const DwsConfig resolved = cfg.resolve(inst, scfg);
  return run_working_set(inst, DwsPolicy(resolved), resolved, scfg);
}

}  // namespace dws
