#pragma once

#include <optional>
#include <string_view>

#include "dws/working_set.hpp"

namespace dws {

enum class StrategyKind { dws, doubling, modified_dws, full };

std::string_view to_string(StrategyKind kind);
std::optional<StrategyKind> parse_strategy(std::string_view name);

/// Skglm-style pruned doubling: keep supp(x_r) and fill with the heaviest
/// violators until the set has max(p0, 2 |supp(x_r)|) members (at most n).
IndexList doubling_next_ws(const IndexList& supp, const std::vector<WeightedIndex>& violating,
                           std::size_t p0, std::size_t n);

class DoublingPolicy : public WorkingSetPolicy {
 public:
  explicit DoublingPolicy(std::size_t p0) : p0_(p0) {}
  std::string name() const override { return "doubling"; }
  IndexList initial(std::span<const double> grad0) const override;
  NextStep next(const IterationView& it) const override;

 private:
  std::size_t p0_;
};

/// DWS with p0 = tau and |supp(x_0)| taken as tau for the first growth step.
class ModifiedDwsPolicy : public DwsPolicy {
 public:
  explicit ModifiedDwsPolicy(const DwsConfig& resolved);
  std::string name() const override { return "modified_dws"; }
  std::size_t supp_before_first() const override { return cfg_.tau; }
};

/// next_tau as used by modified DWS: at r = 1 the previous support is tau.
TauStep modified_dws_next(std::size_t r, std::size_t supp_now, std::size_t supp_prev,
                          std::size_t a_prev, double h, std::size_t tau, std::size_t k,
                          std::size_t e_size);

/// One solve over all n variables; E is then checked without exclusion.
RunResult run_full(const Instance& inst, const SolverConfig& scfg, double kkt_eps);

RunResult run_strategy(StrategyKind kind, const Instance& inst, const DwsConfig& cfg,
                       const SolverConfig& scfg);

}  // namespace dws
