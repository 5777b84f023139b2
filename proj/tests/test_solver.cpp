#include <cmath>

#include "doctest.h"
#include "dws/errors.hpp"
#include "dws/instance.hpp"
#include "dws/solver.hpp"
#include "support.hpp"

using dws::DenseMatrix;
using dws::InnerSolver;
using dws::SolverConfig;
using dws::Vec;

namespace {

SolverConfig config(InnerSolver v, double tol) {
  SolverConfig c;
  c.variant = v;
  c.tol_inner = tol;
  return c;
}

double restricted_objective(const DenseMatrix& a, const Vec& b, double eta, const Vec& x) {
  return dws::objective(a, b, eta, x);
}

}  // namespace

TEST_CASE("soft threshold and sign") {
  CHECK(dws::soft_threshold(2.0, 1.0) == 1.0);
  CHECK(dws::soft_threshold(-2.0, 0.5) == -1.5);
  CHECK(dws::soft_threshold(0.3, 0.5) == 0.0);
  CHECK(dws::soft_threshold(-0.5, 0.5) == 0.0);
  CHECK(dws::sign(0.0) == 0.0);
  CHECK(dws::sign(-1e-300) == -1.0);
}

TEST_CASE("kkt residual by hand") {
  // x_i = 0: max(|g| - eta, 0); x_i != 0: |g + sign(x) eta|.
  const Vec g{-3.0, 0.5, -0.5, 0.2};
  const Vec x{0.0, 0.0, 2.0, -1.0};
  CHECK(dws::kkt_residual(g, x, 1.0) == doctest::Approx(2.0));
  const Vec g2{0.5, -1.0};
  const Vec x2{0.0, 4.0};
  CHECK(dws::kkt_residual(g2, x2, 1.0) == 0.0);
  CHECK_THROWS_AS(dws::kkt_residual(g2, Vec{0.0}, 1.0), dws::InputError);
}

TEST_CASE("one-dimensional restricted solves") {
  DenseMatrix a(1, 1, {1.0});
  for (auto v : {InnerSolver::gpsr_bb, InnerSolver::ista_oracle}) {
    const auto s1 = dws::solve_restricted(a, Vec{2.0}, 1.0, Vec{0.0}, config(v, 1e-12));
    CHECK(s1.x_w[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s1.converged);
    CHECK(s1.f_value == doctest::Approx(1.5));
    const auto s2 = dws::solve_restricted(a, Vec{2.0}, 3.0, Vec{0.0}, config(v, 1e-12));
    CHECK(s2.x_w[0] == 0.0);
    const auto s3 = dws::solve_restricted(a, Vec{2.0}, 3.0, Vec{5.0}, config(v, 1e-12));
    CHECK(s3.x_w[0] == 0.0);
  }
}

TEST_CASE("gpsr_bb and ista_oracle agree on a 30x12 problem") {
  const DenseMatrix a = testing::random_matrix(30, 12, 31);
  const Vec b = testing::random_vec(30, 32);
  const double eta = 0.3 * dws::norm_inf(dws::matvec_t(a, b));
  const Vec warm(12, 0.0);
  const auto g = dws::solve_restricted(a, b, eta, warm, config(InnerSolver::gpsr_bb, 1e-10));
  const auto r = dws::solve_restricted(a, b, eta, warm, config(InnerSolver::ista_oracle, 1e-12));
  CHECK(g.converged);
  CHECK(r.converged);
  CHECK(std::abs(g.f_value - r.f_value) <= 1e-8);
  CHECK(g.kkt_residual <= 1e-10);
  const Vec grad = dws::gradient(a, dws::matvec_t(a, b), g.x_w, dws::support(g.x_w));
  CHECK(dws::kkt_residual(grad, g.x_w, eta) <= 1e-10);
  CHECK(g.f_value == doctest::Approx(restricted_objective(a, b, eta, g.x_w)).epsilon(1e-14));
}

TEST_CASE("gpsr_bb never ends above the warm start") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DenseMatrix a = testing::random_matrix(25, 40, 100 + seed);
    const Vec b = testing::random_vec(25, 200 + seed);
    const double eta = 0.2 * dws::norm_inf(dws::matvec_t(a, b));
    const Vec warm = testing::random_vec(40, 300 + seed, 0.1);
    for (std::size_t cap : {1u, 3u, 10u, 1000u}) {
      SolverConfig c = config(InnerSolver::gpsr_bb, 1e-10);
      c.max_inner_iters = cap;
      const auto s = dws::solve_restricted(a, b, eta, warm, c);
      CHECK(s.f_value <= restricted_objective(a, b, eta, warm));
      CHECK(s.iters_used <= cap);
    }
  }
}

TEST_CASE("ista_oracle objective is monotone across iterations") {
  const DenseMatrix a = testing::random_matrix(20, 30, 41);
  const Vec b = testing::random_vec(20, 42);
  const double eta = 0.1 * dws::norm_inf(dws::matvec_t(a, b));
  const Vec warm(30, 0.0);
  double prev = restricted_objective(a, b, eta, warm);
  for (std::size_t cap = 1; cap <= 60; ++cap) {
    SolverConfig c = config(InnerSolver::ista_oracle, 1e-14);
    c.max_inner_iters = cap;
    const auto s = dws::solve_restricted(a, b, eta, warm, c);
    CHECK(s.f_value <= prev);
    prev = s.f_value;
  }
}

TEST_CASE("iteration cap reports non-convergence") {
  const DenseMatrix a = testing::random_matrix(20, 30, 43);
  const Vec b = testing::random_vec(20, 44);
  const double eta = 0.01 * dws::norm_inf(dws::matvec_t(a, b));
  SolverConfig c = config(InnerSolver::gpsr_bb, 1e-14);
  c.max_inner_iters = 2;
  const auto s = dws::solve_restricted(a, b, eta, Vec(30, 0.0), c);
  CHECK_FALSE(s.converged);
  CHECK(s.kkt_residual > 1e-14);
}

TEST_CASE("solver input validation") {
  DenseMatrix a(1, 1, {1.0});
  const SolverConfig c;
  CHECK_THROWS_AS(dws::solve_restricted(a, Vec{2.0}, 1.0, Vec{0.0, 0.0}, c), dws::InputError);
  CHECK_THROWS_AS(dws::solve_restricted(a, Vec{2.0, 1.0}, 1.0, Vec{0.0}, c), dws::InputError);
  CHECK_THROWS_AS(dws::solve_restricted(a, Vec{2.0}, 0.0, Vec{0.0}, c), dws::InputError);
  SolverConfig bad;
  bad.tol_inner = 0.0;
  CHECK_THROWS_AS(bad.validate(), dws::InputError);
  bad = SolverConfig{};
  bad.max_inner_iters = 0;
  CHECK_THROWS_AS(bad.validate(), dws::InputError);
}

TEST_CASE("full oracle: trivial and closed-form cases") {
  DenseMatrix a(1, 1, {1.0});
  CHECK(dws::solve_full_oracle(dws::make_instance(a, Vec{2.0}, 0.5), 1e-12)[0] ==
        doctest::Approx(1.5).epsilon(1e-12));
  const DenseMatrix m = testing::random_matrix(5, 8, 51);
  const Vec b = testing::random_vec(5, 52);
  const double top = dws::norm_inf(dws::matvec_t(m, b));
  const Vec x = dws::solve_full_oracle(dws::make_instance(m, b, top), 1e-12);
  CHECK(dws::support(x).empty());
  CHECK_THROWS_AS(dws::solve_full_oracle(dws::make_instance(a, Vec{2.0}, 0.5), 0.0),
                  dws::InputError);
}

TEST_CASE("full oracle is at least as good as a full gpsr_bb solve on the seed-42 instance") {
  dws::GeneratorConfig g;
  g.n = 2000;
  g.s = 20;
  g.seed = 42;
  const dws::Instance inst = dws::generate(g);
  const Vec x_star = dws::solve_full_oracle(inst, 1e-12);
  const double f_star = dws::objective(inst.a, inst.b, inst.eta, x_star);
  const auto full = dws::solve_restricted(inst.a, inst.b, inst.eta, Vec(inst.n(), 0.0),
                                          config(InnerSolver::gpsr_bb, 1e-9));
  CHECK(f_star <= full.f_value + 1e-9);
  const Vec grad = dws::gradient(inst.a, inst.atb(), x_star, dws::support(x_star));
  CHECK(dws::kkt_residual(grad, x_star, inst.eta) <= 1e-12);
  CHECK(dws::default_tol_inner(inst) == doctest::Approx(1e-9 * (1 + dws::norm_inf(inst.atb()))));
}
