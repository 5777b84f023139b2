#include "dws/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "dws/certify.hpp"
#include "dws/errors.hpp"
#include "dws/instance.hpp"
#include "dws/report.hpp"
#include "dws/solver.hpp"
#include "dws/strategies.hpp"

namespace dws {

namespace {

struct GenFlags {
  std::size_t n = 0;
  std::size_t s = 0;
  double c = 2.0;
  std::optional<std::size_t> k;
  double alpha = 0.1;
  double sigma2 = 1e-4;
  std::uint64_t seed = 0;
  bool normalize_b = false;

  GeneratorConfig config(std::uint64_t seed_override) const {
    GeneratorConfig g;
    g.n = n;
    g.s = s;
    g.c = c;
    g.k = k;
    g.eta_alpha = alpha;
    g.noise_sigma2 = sigma2;
    g.seed = seed_override;
    g.normalize_b = normalize_b;
    return g;
  }
};

void add_gen_flags(CLI::App* app, GenFlags& f) {
  app->add_option("--n", f.n, "number of columns")->required();
  app->add_option("--s", f.s, "number of spikes")->required();
  app->add_option("--c", f.c, "constant in k = ceil(c s ln(n/s))");
  app->add_option("--k", f.k, "number of rows (overrides --c)");
  app->add_option("--alpha", f.alpha, "eta = alpha ||A^T b||_inf");
  app->add_option("--sigma2", f.sigma2, "noise variance");
  app->add_flag("--normalize-b", f.normalize_b, "scale b to unit norm");
}

struct SolveFlags {
  std::string strategy = "dws";
  double h = 2.0;
  std::optional<std::size_t> tau;
  std::size_t p0 = 10;
  std::optional<double> tol_inner;
  std::optional<double> kkt_eps;
  std::size_t max_outer = 500;
  std::string solver = "gpsr_bb";
};

void add_solve_flags(CLI::App* app, SolveFlags& f) {
  app->add_option("--h", f.h, "growth base in (1, 2]");
  app->add_option("--tau", f.tau, "base growth size (default floor(4 ln^2 n), capped at k)");
  app->add_option("--p0", f.p0, "initial working set size");
  app->add_option("--tol-inner", f.tol_inner, "restricted KKT tolerance");
  app->add_option("--kkt-eps", f.kkt_eps, "violation margin for E");
  app->add_option("--max-outer", f.max_outer, "outer iteration cap");
  app->add_option("--solver", f.solver, "inner solver: gpsr_bb or ista_oracle");
}

std::vector<StrategyKind> parse_strategies(const std::string& list) {
  std::vector<StrategyKind> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto kind = parse_strategy(item);
    if (!kind) throw InputError("unknown strategy '" + item + "'");
    out.push_back(*kind);
  }
  if (out.empty()) throw InputError("no strategies given");
  return out;
}

std::pair<DwsConfig, SolverConfig> configs(const SolveFlags& f, const Instance& inst) {
  if (!(f.h > 1.0 && f.h <= 2.0)) throw InputError("--h must lie in (1, 2]");
  SolverConfig scfg;
  if (f.solver == "gpsr_bb") {
    scfg.variant = InnerSolver::gpsr_bb;
  } else if (f.solver == "ista_oracle") {
    scfg.variant = InnerSolver::ista_oracle;
  } else {
    throw InputError("unknown solver '" + f.solver + "'");
  }
  scfg.tol_inner = f.tol_inner ? *f.tol_inner : default_tol_inner(inst);
  scfg.validate();
  DwsConfig cfg;
  cfg.h = f.h;
  cfg.tau = f.tau.value_or(0);
  if (f.tau && *f.tau == 0) throw InputError("--tau must be positive");
  cfg.p0 = f.p0;
  cfg.kkt_eps = f.kkt_eps.value_or(-1.0);
  if (f.kkt_eps && *f.kkt_eps < 0.0) throw InputError("--kkt-eps must be nonnegative");
  cfg.max_outer = f.max_outer;
  return {cfg, scfg};
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open " + path + " for writing");
  return os;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    auto os = open_out(path);
    os << text;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lasso solver with dynamic working sets"};
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);

  GenFlags gen;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "generate a compressed-sensing instance");
  add_gen_flags(gen_cmd, gen);
  gen_cmd->add_option("--seed", gen.seed, "generator seed");
  gen_cmd->add_option("--out", gen_out, "instance file")->required();

  std::string solve_in, solve_trace, solve_summary, solve_x;
  SolveFlags solve;
  auto* solve_cmd = app.add_subcommand("solve", "run a working-set strategy");
  solve_cmd->add_option("--in", solve_in, "instance file")->required();
  solve_cmd->add_option("--strategy", solve.strategy, "dws, doubling, modified_dws or full");
  solve_cmd->add_option("--trace", solve_trace, "trace CSV path");
  solve_cmd->add_option("--summary", solve_summary, "summary JSON path (default stdout)");
  solve_cmd->add_option("--x-out", solve_x, "solution file");
  add_solve_flags(solve_cmd, solve);

  std::string cert_in, cert_x, cert_out;
  double cert_tol = 1e-8;
  auto* cert_cmd = app.add_subcommand("certify", "check global optimality of a solution");
  cert_cmd->add_option("--in", cert_in, "instance file")->required();
  cert_cmd->add_option("--x", cert_x, "solution file")->required();
  cert_cmd->add_option("--tol", cert_tol, "violation tolerance");
  cert_cmd->add_option("--out", cert_out, "certificate JSON path (default stdout)");

  GenFlags bgen;
  SolveFlags bsolve;
  std::uint64_t seed_from = 0, seed_to = 0;
  std::string bench_strategies = "dws,doubling", bench_out, bench_summaries;
  auto* bench_cmd = app.add_subcommand("bench", "seed range x strategies, combined trace CSV");
  add_gen_flags(bench_cmd, bgen);
  add_solve_flags(bench_cmd, bsolve);
  bench_cmd->add_option("--seed-from", seed_from, "first seed")->required();
  bench_cmd->add_option("--seed-to", seed_to, "last seed (inclusive)")->required();
  bench_cmd->add_option("--strategies", bench_strategies, "comma-separated strategies");
  bench_cmd->add_option("--out", bench_out, "combined CSV path (default stdout)");
  bench_cmd->add_option("--summaries", bench_summaries, "JSON array of run summaries");

  std::string oracle_in, oracle_out;
  double oracle_tol = 1e-12;
  auto* oracle_cmd = app.add_subcommand("oracle", "high-precision full solve");
  oracle_cmd->add_option("--in", oracle_in, "instance file")->required();
  oracle_cmd->add_option("--out", oracle_out, "solution file")->required();
  oracle_cmd->add_option("--tol", oracle_tol, "KKT tolerance");

  std::vector<std::string> argv_store{"dws"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*gen_cmd) {
      const Instance inst = generate(gen.config(gen.seed));
      write_instance(gen_out, inst);
    } else if (*solve_cmd) {
      const auto kind = parse_strategy(solve.strategy);
      if (!kind) throw InputError("unknown strategy '" + solve.strategy + "'");
      const Instance inst = read_instance(solve_in);
      const auto [cfg, scfg] = configs(solve, inst);
      const RunResult run = run_strategy(*kind, inst, cfg, scfg);
      if (!solve_trace.empty()) {
        auto os = open_out(solve_trace);
        write_trace_csv(os, run.trace);
      }
      if (!solve_x.empty()) write_solution(solve_x, run.x);
      emit(solve_summary, to_json(summarize(std::string(to_string(*kind)), inst, run)), out);
    } else if (*cert_cmd) {
      const Instance inst = read_instance(cert_in);
      const Vec x = read_solution(cert_x);
      emit(cert_out, to_json(check_global(inst, x, cert_tol)), out);
    } else if (*bench_cmd) {
      if (seed_to < seed_from) throw InputError("--seed-to must be >= --seed-from");
      const auto kinds = parse_strategies(bench_strategies);
      const std::size_t seeds = static_cast<std::size_t>(seed_to - seed_from) + 1;
      const std::size_t cells = seeds * kinds.size();
      bgen.config(seed_from).validate();
      std::vector<std::vector<BenchRow>> rows(cells);
      std::vector<RunSummary> summaries(cells);
      std::vector<std::string> errors(cells);
      std::vector<int> codes(cells, kExitOk);
#pragma omp parallel for schedule(dynamic)
      for (std::size_t c = 0; c < cells; ++c) {
        const std::uint64_t seed = seed_from + c / kinds.size();
        const StrategyKind kind = kinds[c % kinds.size()];
        try {
          const Instance inst = generate(bgen.config(seed));
          const auto [cfg, scfg] = configs(bsolve, inst);
          const RunResult run = run_strategy(kind, inst, cfg, scfg);
          const std::string name(to_string(kind));
          for (const auto& t : run.trace) rows[c].push_back({name, seed, t});
          summaries[c] = summarize(name, inst, run);
        } catch (const NumericalError& e) {
          errors[c] = e.what();
          codes[c] = kExitNumerical;
        } catch (const std::exception& e) {
          errors[c] = e.what();
          codes[c] = kExitUsage;
        }
      }
      for (std::size_t c = 0; c < cells; ++c) {
        if (codes[c] != kExitOk) {
          err << "error: seed " << seed_from + c / kinds.size() << ": " << errors[c] << "\n";
          return codes[c];
        }
      }
      std::vector<BenchRow> all;
      for (auto& r : rows) all.insert(all.end(), r.begin(), r.end());
      std::ostringstream csv;
      write_bench_csv(csv, std::move(all));
      emit(bench_out, csv.str(), out);
      if (!bench_summaries.empty()) {
        std::string arr = "[\n";
        for (std::size_t c = 0; c < cells; ++c) {
          arr += to_json(summaries[c]);
          if (c + 1 < cells) arr += ",\n";
        }
        arr += "]\n";
        emit(bench_summaries, arr, out);
      }
    } else if (*oracle_cmd) {
      const Instance inst = read_instance(oracle_in);
      write_solution(oracle_out, solve_full_oracle(inst, oracle_tol));
    }
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace dws
