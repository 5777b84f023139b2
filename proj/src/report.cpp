#include "dws/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <tuple>

#include "json.hpp"

namespace dws {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_fields(std::ostream& os, const TraceRecord& t) {
  os << t.r << ',' << t.ws_size << ',' << t.supp_size << ',' << t.e_size << ',' << t.tau_next
     << ',' << fmt17(t.objective) << ',' << t.inner_iters << ',' << fmt17(t.cum_seconds) << '\n';
}

}  // namespace

void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace) {
  os << kTraceHeader << '\n';
  for (const auto& t : trace) write_fields(os, t);
}

RunSummary summarize(const std::string& strategy, const Instance& inst, const RunResult& run) {
  RunSummary s;
  s.strategy = strategy;
  s.seed = inst.seed;
  s.n = inst.n();
  s.s = inst.s;
  s.k = inst.k();
  s.eta = inst.eta;
  s.outer_iterations = run.trace.size();
  s.sum_tau = run.sum_tau();
  s.max_ws = run.max_ws();
  s.final_supp = support(run.x).size();
  s.final_objective = objective(inst.a, inst.b, inst.eta, run.x);
  s.wall_seconds = run.wall_seconds;
  s.max_violation = check_global(inst, run.x, 0.0).max_violation;
  s.terminated = run.terminated;
  s.truncated = run.truncated;
  return s;
}

std::string to_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["strategy"] = s.strategy;
  j["seed"] = s.seed;
  j["n"] = s.n;
  j["s"] = s.s;
  j["k"] = s.k;
  j["eta"] = s.eta;
  j["outer_iterations"] = s.outer_iterations;
  j["sum_tau"] = s.sum_tau;
  j["max_ws"] = s.max_ws;
  j["final_supp"] = s.final_supp;
  j["final_objective"] = s.final_objective;
  j["wall_seconds"] = s.wall_seconds;
  j["max_violation"] = s.max_violation;
  j["terminated"] = s.terminated;
  j["truncated"] = s.truncated;
  return j.dump(2) + "\n";
}

std::string to_json(const Certificate& c) {
  nlohmann::ordered_json j;
  j["status"] = c.optimal ? "optimal" : "not_optimal";
  j["max_violation"] = c.max_violation;
  j["tolerance"] = c.tolerance;
  auto worst = nlohmann::ordered_json::array();
  for (const auto& w : c.worst) worst.push_back({{"index", w.index}, {"violation", w.weight}});
  j["worst"] = worst;
  return j.dump(2) + "\n";
}

void write_bench_csv(std::ostream& os, std::vector<BenchRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.seed, a.strategy, a.rec.r) < std::tie(b.seed, b.strategy, b.rec.r);
  });
  os << kBenchHeader << '\n';
  for (const auto& row : rows) {
    os << row.strategy << ',' << row.seed << ',';
    write_fields(os, row.rec);
  }
}

}  // namespace dws
