#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dws/certify.hpp"
#include "dws/instance.hpp"
#include "dws/working_set.hpp"

namespace dws {

inline constexpr const char* kTraceHeader =
    "r,ws_size,supp_size,e_size,tau_next,objective,inner_iters,cum_seconds";

/// Header line plus one row per trace record; floats with 17 significant digits.
void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace);

struct RunSummary {
  std::string strategy;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t s = 0;
  std::size_t k = 0;
  double eta = 0;
  std::size_t outer_iterations = 0;
  std::size_t sum_tau = 0;
  std::size_t max_ws = 0;
  std::size_t final_supp = 0;
  double final_objective = 0;
  double wall_seconds = 0;
  double max_violation = 0;
  bool terminated = false;
  bool truncated = false;
};

/// Fills every field; certifies the final x against its own instance.
RunSummary summarize(const std::string& strategy, const Instance& inst, const RunResult& run);

std::string to_json(const RunSummary& s);
std::string to_json(const Certificate& c);

/// Trace rows prefixed with strategy and seed, for the bench subcommand.
struct BenchRow {
  std::string strategy;
  std::uint64_t seed = 0;
  TraceRecord rec;
};

inline constexpr const char* kBenchHeader =
    "strategy,seed,r,ws_size,supp_size,e_size,tau_next,objective,inner_iters,cum_seconds";

/// Sorts by (seed, strategy, r) and writes header plus rows.
void write_bench_csv(std::ostream& os, std::vector<BenchRow> rows);

}  // namespace dws
