#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "dws/instance.hpp"
#include "dws/report.hpp"
#include "dws/strategies.hpp"
#include "json.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

dws::TraceRecord record(std::size_t r, double f) {
  dws::TraceRecord t;
  t.r = r;
  t.ws_size = 10 * r;
  t.supp_size = r;
  t.e_size = 3;
  t.tau_next = 2;
  t.objective = f;
  t.inner_iters = 7;
  t.cum_seconds = 0.1 * r;
  return t;
}

}  // namespace

TEST_CASE("trace CSV schema and lossless floats") {
  const double tricky = 0.1 + 0.2;
  std::ostringstream os;
  dws::write_trace_csv(os, {record(1, tricky), record(2, 1.0 / 3.0)});
  const auto lines = split(os.str(), '\n');
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "r,ws_size,supp_size,e_size,tau_next,objective,inner_iters,cum_seconds");
  const auto f = split(lines[1], ',');
  REQUIRE(f.size() == 8);
  CHECK(f[0] == "1");
  CHECK(f[1] == "10");
  CHECK(std::strtod(f[5].c_str(), nullptr) == tricky);
  CHECK(std::strtod(split(lines[2], ',')[5].c_str(), nullptr) == 1.0 / 3.0);
}

TEST_CASE("summary JSON carries every field") {
  dws::GeneratorConfig g;
  g.n = 500;
  g.s = 10;
  g.seed = 3;
  const dws::Instance inst = dws::generate(g);
  dws::SolverConfig sc;
  sc.tol_inner = dws::default_tol_inner(inst);
  const auto run = dws::run_strategy(dws::StrategyKind::dws, inst, dws::DwsConfig{}, sc);
  const auto s = dws::summarize("dws", inst, run);
  const auto j = nlohmann::json::parse(dws::to_json(s));
  for (const char* key : {"strategy", "seed", "n", "s", "k", "eta", "outer_iterations", "sum_tau",
                          "max_ws", "final_supp", "final_objective", "wall_seconds",
                          "max_violation", "terminated", "truncated"})
    CHECK_MESSAGE(j.contains(key), key);
  CHECK(j["strategy"] == "dws");
  CHECK(j["seed"] == 3);
  CHECK(j["k"] == inst.k());
  CHECK(j["eta"].get<double>() == inst.eta);
  CHECK(j["outer_iterations"] == run.trace.size());
  CHECK(j["sum_tau"] == run.sum_tau());
  CHECK(j["max_ws"] == run.max_ws());
  CHECK(j["final_objective"].get<double>() == dws::objective(inst.a, inst.b, inst.eta, run.x));
  CHECK(j["terminated"] == true);
}

TEST_CASE("certificate JSON status") {
  dws::Certificate c;
  c.max_violation = 1e-10;
  c.tolerance = 1e-8;
  c.optimal = true;
  c.worst = {{4, 1e-10}};
  const auto j = nlohmann::json::parse(dws::to_json(c));
  CHECK(j["status"] == "optimal");
  CHECK(j["worst"][0]["index"] == 4);
  c.optimal = false;
  CHECK(nlohmann::json::parse(dws::to_json(c))["status"] == "not_optimal");
}

TEST_CASE("bench CSV rows are sorted by seed, strategy and r") {
  std::vector<dws::BenchRow> rows{{"dws", 2, record(1, 1.0)},
                                  {"doubling", 2, record(2, 1.0)},
                                  {"doubling", 2, record(1, 1.0)},
                                  {"dws", 1, record(1, 1.0)}};
  std::ostringstream os;
  dws::write_bench_csv(os, rows);
  const auto lines = split(os.str(), '\n');
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == std::string("strategy,seed,") + dws::kTraceHeader);
  CHECK(lines[1].rfind("dws,1,1,", 0) == 0);
  CHECK(lines[2].rfind("doubling,2,1,", 0) == 0);
  CHECK(lines[3].rfind("doubling,2,2,", 0) == 0);
  CHECK(lines[4].rfind("dws,2,1,", 0) == 0);
}
