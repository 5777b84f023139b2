// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed below.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dws/certify.hpp"
#include "dws/instance.hpp"
#include "dws/rng.hpp"
#include "dws/solver.hpp"
#include "dws/strategies.hpp"
#include "dws/working_set.hpp"

using namespace dws;

namespace {

constexpr double kOracleTol = 1e-12;
constexpr double kObjectiveRel = 1e-6;
constexpr double kDescentRel = 1e-12;
constexpr double kContractionEps = 0.01;
constexpr double kIdentityRel = 1e-10;
constexpr double kOrthoTol = 1e-10;
constexpr double kFdStep = 1e-6;
constexpr double kFdRel = 1e-5;
constexpr double kSoftTol = 1e-12;
constexpr double kLowerSlack = 1e-9;
constexpr double kSecondsPerSeed = 10.0;

int failures = 0;

void report(const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void info(const char* name, const std::string& detail) {
  std::printf("[INFO] %s: %s\n", name, detail.c_str());
  std::fflush(stdout);
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Case {
  std::string label;
  GeneratorConfig gen;
  Instance inst;
  SolverConfig scfg;
  DwsConfig cfg;  // resolved
  Vec x_star;
  double f_star = 0;
  RunResult dws;
  RunResult doubling;
  RunResult modified;
};

Case make_case(const std::string& label, std::size_t n, std::size_t s, std::uint64_t seed,
               bool normalize, bool comparators) {
  Case c;
  c.label = label;
  c.gen.n = n;
  c.gen.s = s;
  c.gen.seed = seed;
  c.gen.normalize_b = normalize;
  c.inst = generate(c.gen);
  c.scfg.tol_inner = default_tol_inner(c.inst);
  DwsConfig cfg;
  cfg.record_sets = true;
  cfg.record_iterates = true;
  c.cfg = cfg.resolve(c.inst, c.scfg);
  c.x_star = solve_full_oracle(c.inst, kOracleTol);
  c.f_star = objective(c.inst.a, c.inst.b, c.inst.eta, c.x_star);
  c.dws = run_dws(c.inst, c.cfg, c.scfg);
  if (comparators) {
    c.doubling = run_strategy(StrategyKind::doubling, c.inst, c.cfg, c.scfg);
    c.modified = run_strategy(StrategyKind::modified_dws, c.inst, c.cfg, c.scfg);
  }
  return c;
}

double f_of(const Instance& inst, const Vec& x) { return objective(inst.a, inst.b, inst.eta, x); }

// Violations of the constructive outer-loop invariants in one run.
std::size_t mechanics_violations(const RunResult& run, const DwsConfig& cfg, std::size_t k,
                                 std::size_t a_start) {
  std::size_t bad = 0;
  std::size_t a_prev = a_start;
  for (std::size_t i = 0; i < run.trace.size(); ++i) {
    const auto& t = run.trace[i];
    IndexList both;
    std::set_intersection(t.working_set.begin(), t.working_set.end(), t.violating.begin(),
                          t.violating.end(), std::back_inserter(both));
    if (!both.empty()) ++bad;
    if (t.a > a_prev + 1) ++bad;
    double grow = static_cast<double>(cfg.tau);
    for (std::size_t j = 0; j < t.a; ++j) grow *= cfg.h;
    const std::size_t cap = std::min<std::size_t>(
        {static_cast<std::size_t>(std::floor(std::min(grow, 1e18))), k, t.e_size});
    if (t.tau_next > cap) ++bad;
    if (i + 1 < run.trace.size() && run.trace[i + 1].ws_size > t.supp_size + t.tau_next) ++bad;
    a_prev = t.a;
  }
  return bad;
}

std::size_t descent_violations(const RunResult& run) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i + 1 < run.trace.size(); ++i) {
    const double f = run.trace[i].objective;
    if (run.trace[i + 1].objective > f + kDescentRel * (1 + std::abs(f))) ++bad;
  }
  return bad;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();

  std::vector<Case> large, small;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) large.push_back(make_case("n2000", 2000, 20, seed, false, true));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) small.push_back(make_case("n500", 500, 10, seed, false, false));
  Case normalized = make_case("n2000-normalized", 2000, 20, 1, true, false);

  std::vector<const Case*> all;
  for (const auto& c : large) all.push_back(&c);
  for (const auto& c : small) all.push_back(&c);
  all.push_back(&normalized);

  std::printf("instances built in %.1f s\n",
              std::chrono::duration<double>(clock::now() - t0).count());

  // Correctness against the oracle.
  {
    bool ok = true;
    double worst_gap = -1e300, worst_time = 0;
    for (const auto& c : large) {
      const double f = f_of(c.inst, c.dws.x);
      const double allowed = c.f_star + kObjectiveRel * (1 + std::abs(c.f_star));
      worst_gap = std::max(worst_gap, f - c.f_star);
      worst_time = std::max(worst_time, c.dws.wall_seconds);
      const bool empty_e = c.dws.terminated && !c.dws.trace.empty() && c.dws.trace.back().e_size == 0;
      if (!(empty_e && f <= allowed && c.dws.wall_seconds < kSecondsPerSeed)) ok = false;
    }
    report("correctness vs oracle", ok,
           fmt("10 seeds n=2000 s=20 k=%zu; max F(dws)-F(oracle) = %.3e; slowest run %.3f s",
               large[0].inst.k(), worst_gap, worst_time));
  }

  // KKT certificate at termination.
  {
    bool ok = true;
    double worst_ratio = 0;
    for (const Case* c : all) {
      const double allowed = c->cfg.kkt_eps + 10 * c->scfg.tol_inner;
      const double v = check_global(c->inst, c->dws.x, allowed).max_violation;
      worst_ratio = std::max(worst_ratio, v / allowed);
      if (!c->dws.terminated || v > allowed) ok = false;
    }
    report("KKT certificate", ok,
           fmt("%zu runs; worst max_violation / (kkt_eps + 10 tol_inner) = %.3f", all.size(), worst_ratio));
  }

  // Outer-loop mechanics.
  {
    std::size_t bad = 0, iters = 0;
    for (const Case* c : all) {
      bad += mechanics_violations(c->dws, c->cfg, c->inst.k(), 0);
      iters += c->dws.trace.size();
    }
    for (const auto& c : large) {
      bad += mechanics_violations(c.modified, c.cfg, c.inst.k(), 0);
      iters += c.modified.trace.size();
    }
    report("outer-loop mechanics", bad == 0,
           fmt("%zu iterations over dws and modified_dws runs; %zu invariant violations", iters, bad));
  }

  // Monotone descent.
  {
    std::size_t bad = 0, runs = 0;
    for (const Case* c : all) {
      bad += descent_violations(c->dws);
      ++runs;
    }
    for (const auto& c : large) {
      bad += descent_violations(c.doubling) + descent_violations(c.modified);
      runs += 2;
    }
    report("monotone descent", bad == 0, fmt("%zu runs; %zu increases beyond 1e-12 relative", runs, bad));
  }

  // Contraction of the objective gap.
  {
    std::size_t checked = 0, failed = 0, premise = 0, small_tau = 0;
    double worst_slack = -1e300;
    for (const auto& c : small) {
      for (const auto& row : contraction_check(c.inst, c.dws, c.x_star, kContractionEps)) {
        switch (row.status) {
          case ContractionStatus::checked:
            ++checked;
            if (!row.passed) ++failed;
            worst_slack = std::max(worst_slack, row.ratio - row.bound);
            break;
          case ContractionStatus::skipped_premise: ++premise; break;
          case ContractionStatus::skipped_small_tau: ++small_tau; break;
          case ContractionStatus::skipped_last: break;
        }
      }
    }
    report("contraction ratio", failed == 0 && checked > 0,
           fmt("eps=%.2f, 10 seeds n=500 s=10: %zu checked, %zu failed, %zu premise-skipped, "
               "%zu with tau<2; max ratio-bound = %.3e",
               kContractionEps, checked, failed, premise, small_tau, worst_slack));
  }

  // Line-minimizer identity.
  {
    CounterRng rng(2024);
    std::size_t pairs = 0, bad = 0;
    double worst = 0;
    while (pairs < 100) {
      for (const auto& c : small) {
        for (const auto& t : c.dws.trace) {
          if (pairs >= 100) break;
          const Vec& x = t.x;
          const Vec g = gradient(c.inst.a, c.inst.atb(), x, support(x));
          const auto e = analysis_violating_set(g, c.inst.eta, x);
          if (e.empty()) continue;
          Vec dir;
          switch (pairs % 3) {
            case 0: {
              dir.assign(c.inst.n(), 0.0);
              dir[e[0].index] = -sign(g[e[0].index]);
              break;
            }
            case 1: {
              if (e.size() >= 2) {
                dir = build_descent(g, c.inst.eta, std::min<std::size_t>(e.size(), 16), c.inst.s,
                                    support(x))
                          .direction;
                break;
              }
              [[fallthrough]];
            }
            default: {
              IndexList idx;
              Vec coeffs;
              const std::size_t m = 1 + rng.below(std::min<std::size_t>(e.size(), 10));
              for (std::size_t i = 0; i < m; ++i) {
                idx.push_back(e[rng.below(e.size())].index);
                coeffs.push_back(rng.uniform01());
              }
              dir = conical_direction(g, idx, coeffs, c.inst.n());
            }
          }
          const auto lm = line_minimizer(c.inst, x, dir);
          const double rel = std::abs(lm.identity_gap()) / (1 + std::abs(lm.f_x));
          worst = std::max(worst, rel);
          if (rel > kIdentityRel) ++bad;
          ++pairs;
        }
      }
    }
    report("line-minimizer identity", bad == 0,
           fmt("%zu (iterate, direction) pairs; worst |gap|/(1+|F|) = %.3e", pairs, worst));
  }

  // Cosine bound of the descent construction.
  {
    CounterRng rng(77);
    std::size_t trials = 0, premise = 0, bad = 0, from_iterates = 0;
    double worst_margin = 1e300;
    // Gradients at recorded iterates of both instance families.
    struct Source {
      const Case* c;
      const TraceRecord* t;
    };
    std::vector<Source> sources;
    for (const Case* c : all)
      for (const auto& t : c->dws.trace)
        if (analysis_violating_set(gradient(c->inst.a, c->inst.atb(), t.x, support(t.x)), c->inst.eta, t.x).size() >= 2)
          sources.push_back({c, &t});
    while (trials < 1000) {
      DescentReport rep;
      if (trials % 2 == 0 && !sources.empty()) {
        const auto& src = sources[rng.below(sources.size())];
        const Case& c = *src.c;
        const Vec& x = src.t->x;
        const Vec g = gradient(c.inst.a, c.inst.atb(), x, support(x));
        const IndexList supp = support(x);
        const std::size_t e_size = violating_set(g, c.inst.eta, 0.0, supp).size();
        const std::size_t tau = 2 + rng.below(std::min<std::size_t>(e_size, 64) - 1);
        IndexList opt = support(*c.inst.z_true);
        rep = build_descent(g, c.inst.eta, tau, c.inst.s, supp, opt);
        ++from_iterates;
      } else {
        const std::size_t n = 100 + rng.below(400);
        const std::size_t tau = 2 + rng.below(40);
        const std::size_t s = 1 + rng.below(30);
        const double eta = 1.0;
        Vec g(n);
        for (auto& v : g) v = eta * rng.uniform01();
        const double spread = 0.05 + 2.0 * rng.uniform01();
        const std::size_t viol = tau + rng.below(2 * tau);
        for (std::size_t i = 0; i < viol; ++i)
          g[rng.below(n)] = (rng.uniform01() < 0.5 ? -1 : 1) * (eta + 1e-3 + spread * rng.uniform01());
        if (violating_set(g, eta, 0.0, {}).size() < tau) continue;
        IndexList opt;
        for (std::size_t i = 0; i < s; ++i) opt.push_back(rng.below(n));
        std::sort(opt.begin(), opt.end());
        opt.erase(std::unique(opt.begin(), opt.end()), opt.end());
        rep = build_descent(g, eta, tau, s, {}, opt);
      }
      ++trials;
      if (!rep.premise_holds) continue;
      ++premise;
      worst_margin = std::min(worst_margin, rep.cos_achieved - rep.cos_bound_required);
      if (rep.cos_achieved < rep.cos_bound_required) ++bad;
    }
    report("descent cosine bound", bad == 0 && premise > 0,
           fmt("%zu trials (%zu at solver iterates), %zu satisfy the premise, %zu below bound; "
               "min cos_achieved - required = %.3e",
               trials, from_iterates, premise, bad, worst_margin));
  }

  // Lower bound on the optimum.
  {
    std::size_t checked = 0, bad = 0, skipped = 0;
    double worst = 1e300;
    for (const Case* c : all) {
      const auto lb = optimum_lower_bound_check(c->inst, c->x_star);
      if (lb.skipped) {
        ++skipped;
        continue;
      }
      ++checked;
      worst = std::min(worst, lb.value / lb.bound);
      if (!lb.passed || lb.value < lb.bound - kLowerSlack) ++bad;
    }
    report("optimum lower bound", bad == 0 && checked > 0,
           fmt("%zu instances checked, %zu skipped (zero optimum); min F(x*)/(eta||b||/4) = %.3f",
               checked, skipped, worst));
  }

  // Generator fidelity.
  {
    bool ok = true;
    double worst_defect = 0;
    for (const Case* c : all) {
      worst_defect = std::max(worst_defect, orthonormality_defect(c->inst.a));
      std::size_t nnz = 0;
      for (double v : *c->inst.z_true) {
        if (v != 0.0) {
          ++nnz;
          if (std::abs(v) != 1.0) ok = false;
        }
      }
      if (nnz != c->gen.s) ok = false;
      if (!(generate(c->gen) == c->inst)) ok = false;
    }
    ok = ok && worst_defect <= kOrthoTol;
    report("generator fidelity", ok,
           fmt("%zu instances; max ||A A^t - I||_max = %.3e; spikes exact; regeneration bit-identical",
               all.size(), worst_defect));
  }

  // Gradient against central differences.
  {
    double worst = 0;
    std::size_t points = 0;
    for (std::size_t ci = 0; ci < 5; ++ci) {
      const Instance& inst = large[ci].inst;
      CounterRng rng(1000 + ci);
      for (int p = 0; p < 20; ++p) {
        Vec x(inst.n(), 0.0);
        for (int j = 0; j < 40; ++j) x[rng.below(inst.n())] = rng.gaussian();
        const Vec g = gradient(inst.a, inst.atb(), x, support(x));
        // f(x +- h e_j) from the residual r = A x - b, shifted by +- h a_j.
        Vec r(inst.k(), 0.0);
        for (std::size_t j = 0; j < inst.n(); ++j)
          for (std::size_t i = 0; i < inst.k(); ++i) r[i] += inst.a(i, j) * x[j];
        for (std::size_t i = 0; i < inst.k(); ++i) r[i] -= inst.b[i];
        double num = 0, den = 0;
        for (std::size_t j = 0; j < inst.n(); ++j) {
          double fp = 0, fm = 0;
          for (std::size_t i = 0; i < inst.k(); ++i) {
            const double up = r[i] + kFdStep * inst.a(i, j), dn = r[i] - kFdStep * inst.a(i, j);
            fp += up * up;
            fm += dn * dn;
          }
          const double fd = (0.5 * fp - 0.5 * fm) / (2 * kFdStep);
          num += (fd - g[j]) * (fd - g[j]);
          den += g[j] * g[j];
        }
        worst = std::max(worst, std::sqrt(num / den));
        ++points;
      }
    }
    report("gradient finite differences", worst <= kFdRel,
           fmt("%zu points over 5 seeds, step %.0e; worst ||fd - grad|| / ||grad|| = %.3e", points,
               kFdStep, worst));
  }

  // Comparative behaviour of DWS and doubling.
  {
    int same_size = 0, small_supp = 0, smaller_ws = 0, mod_smaller_ws = 0;
    std::string sizes;
    for (const auto& c : large) {
      const std::size_t sd = support(c.dws.x).size(), sp = support(c.doubling.x).size();
      if (sd == sp) ++same_size;
      if (sd <= 2 * c.inst.s) ++small_supp;
      if (c.dws.max_ws() <= c.doubling.max_ws()) ++smaller_ws;
      if (c.modified.max_ws() <= c.doubling.max_ws()) ++mod_smaller_ws;
      sizes += fmt(" %zu/%zu", c.dws.max_ws(), c.doubling.max_ws());
    }
    report("comparative (a) same final support size", same_size >= 8,
           fmt("%d/10 seeds agree (need 8)", same_size));
    report("comparative (b) final support <= 2s", small_supp >= 8,
           fmt("%d/10 seeds (need 8)", small_supp));
    report("comparative (c) max working set dws <= doubling", smaller_ws >= 7,
           fmt("%d/10 seeds (need 7); max|W| dws/doubling:%s", smaller_ws, sizes.c_str()));
    info("comparative (c) modified_dws vs doubling",
         fmt("modified_dws max|W| <= doubling max|W| on %d/10 seeds (p0 = tau for modified_dws, "
             "p0 = 10 for doubling)", mod_smaller_ws));

    const double eps = kContractionEps;
    const double s = static_cast<double>(normalized.inst.s);
    const double eta = normalized.inst.eta;
    const double quantity = (1 / eps) * s * std::log(s) * std::log(eta * eta / (2 * eps));
    info("comparative (d) sum of tau",
         fmt("normalized-b run: sum tau = %zu over %zu iterations; eta = %.4e; "
             "(1/eps) s ln s ln(eta^2/(2 eps)) at eps=%.2f = %.4e",
             normalized.dws.sum_tau(), normalized.dws.trace.size(), eta, eps, quantity));
  }

  // One-dimensional closed forms.
  {
    CounterRng rng(31);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      double a = 0.1 + 3.0 * rng.uniform01();
      if (rng.uniform01() < 0.5) a = -a;
      const double b = 4.0 * (rng.uniform01() - 0.5);
      const double eta = 0.01 + 2.0 * rng.uniform01();
      const double want = soft_threshold(a * b, eta) / (a * a);
      DenseMatrix am(1, 1, {a});
      for (auto v : {InnerSolver::gpsr_bb, InnerSolver::ista_oracle}) {
        SolverConfig sc;
        sc.variant = v;
        sc.tol_inner = 1e-15;
        const auto sol = solve_restricted(am, Vec{b}, eta, Vec{0.0}, sc);
        worst = std::max(worst, std::abs(sol.x_w[0] - want));
      }
    }
    report("soft-threshold closed forms", worst <= kSoftTol,
           fmt("100 (a, b, eta) triples, both inner solvers; max |x - S(ab, eta)/a^2| = %.3e", worst));
  }

  std::printf("%d criteria failed; total %.1f s\n", failures,
              std::chrono::duration<double>(clock::now() - t0).count());
  return failures == 0 ? 0 : 1;
}
